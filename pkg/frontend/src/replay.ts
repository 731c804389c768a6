// Replay a captured server message log and digest every rendered frame.
// The view is a pure function of the message history, so the digest
// sequence is stable across replays.

import { parseServerMsg } from './protocol.js';
import { RecordingDraw, render } from './render.js';
import { initialView, reduce, type ClientView } from './state.js';

export interface ReplayResult {
  frames: number;
  digests: string[];
  paletteMatchesMask: boolean;
  sawRejectedFlash: boolean;
  finalView: ClientView;
}

export function replayLog(lines: string[]): ReplayResult {
  let view = initialView();
  const digests: string[] = [];
  let paletteMatchesMask = true;
  let sawRejectedFlash = false;
  for (const line of lines) {
    if (!line.trim()) {
      continue;
    }
    const msg = parseServerMsg(line);
    view = reduce(view, { kind: 'server', msg });
    if (view.flash) {
      sawRejectedFlash = true;
    }
    if (msg.type === 'state') {
      if (view.hello) {
        const mask = msg.human.mask;
        for (const entry of view.palette) {
          if (entry.legal !== (mask[entry.id] ?? false)) {
            paletteMatchesMask = false;
          }
        }
      }
      const draw = new RecordingDraw();
      render(view, 1.0, draw);
      digests.push(draw.digest());
    }
  }
  return {
    frames: digests.length,
    digests,
    paletteMatchesMask,
    sawRejectedFlash,
    finalView: view,
  };
}

export function aggregateDigest(digests: string[]): string {
  let h = 0x811c9dc5;
  for (const digest of digests) {
    for (let i = 0; i < digest.length; i += 1) {
      h ^= digest.charCodeAt(i);
      h = Math.imul(h, 0x01000193) >>> 0;
    }
  }
  return h.toString(16).padStart(8, '0');
}
