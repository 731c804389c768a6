// Keyboard mapping: held direction keys synthesize one of the eight move
// actions; palette hotkeys fire catalog actions. Masked-out actions send
// nothing.

import type { ActionMsg } from './protocol.js';
import type { ClientView } from './state.js';

const DIR_KEYS: Record<string, [number, number]> = {
  ArrowUp: [0, 1],
  ArrowDown: [0, -1],
  ArrowLeft: [-1, 0],
  ArrowRight: [1, 0],
  KeyW: [0, 1],
  KeyS: [0, -1],
  KeyA: [-1, 0],
  KeyD: [1, 0],
};

// Move names by (dx, dy) with +y pointing up-court.
const MOVE_BY_DIR: Record<string, string> = {
  '1,0': 'Move_E',
  '1,1': 'Move_NE',
  '0,1': 'Move_N',
  '-1,1': 'Move_NW',
  '-1,0': 'Move_W',
  '-1,-1': 'Move_SW',
  '0,-1': 'Move_S',
  '1,-1': 'Move_SE',
};

export class InputMapper {
  private held = new Set<string>();

  keyDown(code: string): void {
    if (code in DIR_KEYS) {
      this.held.add(code);
    }
  }

  keyUp(code: string): void {
    this.held.delete(code);
  }

  private direction(): [number, number] | null {
    let dx = 0;
    let dy = 0;
    for (const code of this.held) {
      const [x, y] = DIR_KEYS[code];
      dx += x;
      dy += y;
    }
    dx = Math.sign(dx);
    dy = Math.sign(dy);
    if (dx === 0 && dy === 0) {
      return null;
    }
    return [dx, dy];
  }

  // Map a key event to an action message, or null if nothing should be sent
  // (unknown key, masked-out action, no catalog yet).
  map(code: string, view: ClientView): ActionMsg | null {
    if (!view.hello || !view.current) {
      return null;
    }
    this.keyDown(code);
    const mask = view.current.human.mask;
    if (code in DIR_KEYS) {
      const dir = this.direction();
      if (!dir) {
        return null;
      }
      const name = MOVE_BY_DIR[`${dir[0]},${dir[1]}`];
      const entry = view.hello.catalog.find((c) => c.name === name);
      if (!entry || !mask[entry.id]) {
        return null;
      }
      return { type: 'action', action: entry.id };
    }
    const hotkey = keyToHotkey(code);
    if (hotkey === null) {
      return null;
    }
    const slot = view.palette.find((p) => p.hotkey === hotkey);
    if (!slot || !slot.legal) {
      return null;
    }
    return { type: 'action', action: slot.id };
  }
}

function keyToHotkey(code: string): string | null {
  const m = /^(?:Digit|Numpad)([0-9])$/.exec(code);
  return m ? m[1] : null;
}
