// UI replay determinism over the captured 3-minute session log.

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import { aggregateDigest, replayLog } from '../src/replay.js';

const here = dirname(fileURLToPath(import.meta.url));
const fixture = join(here, '..', 'fixtures', 'session.jsonl');
const lines = readFileSync(fixture, 'utf8').split('\n');

describe('captured-session replay', () => {
  it('renders one frame per state with stable digests', () => {
    const a = replayLog(lines);
    const b = replayLog(lines);
    expect(a.frames).toBe(1800);
    expect(a.digests).toEqual(b.digests);
    expect(aggregateDigest(a.digests)).toBe(aggregateDigest(b.digests));
  });

  it('matches the pinned aggregate digest', () => {
    const pinned = readFileSync(join(here, '..', 'fixtures', 'session.digest'),
      'utf8').trim();
    const result = replayLog(lines);
    expect(aggregateDigest(result.digests)).toBe(pinned);
  });

  it('keeps the palette equal to the mask in every frame', () => {
    const result = replayLog(lines);
    expect(result.paletteMatchesMask).toBe(true);
  });

  it('exercises the rejected-action path', () => {
    const result = replayLog(lines);
    expect(result.sawRejectedFlash).toBe(true);
    expect(result.finalView.flash?.reason).toBe('illegal');
  });

  it('ends with the final-score modal state', () => {
    const result = replayLog(lines);
    expect(result.finalView.end).not.toBeNull();
    expect(result.finalView.end?.scores).toHaveLength(2);
  });
});
