import { describe, expect, it } from 'vitest';

import { InputMapper } from '../src/input.js';
import type { HelloMsg, StateMsg } from '../src/protocol.js';
import { initialView, reduce, type ClientView } from '../src/state.js';

const hello: HelloMsg = {
  type: 'hello',
  court: { width: 15, length: 11.4, basket: [7.5, 0.8], arc: 6.75 },
  players: [{ pid: 0, team: 'home', role: 'SG' }],
  human_pid: 0,
  catalog: [
    { id: 0, name: 'Idle', category: 'Idle', duration: 1 },
    { id: 1, name: 'Move_E', category: 'Move', duration: 2 },
    { id: 2, name: 'Move_NE', category: 'Move', duration: 2 },
    { id: 3, name: 'Move_N', category: 'Move', duration: 2 },
    { id: 4, name: 'Grab', category: 'Grab', duration: 2 },
    { id: 5, name: 'ShootClose', category: 'Shoot', duration: 4 },
  ],
  speed: 10,
  match_ticks: 1800,
  shot_clock_ticks: 200,
};

function viewWithMask(mask: boolean[]): ClientView {
  let view = reduce(initialView(), { kind: 'server', msg: hello });
  const state: StateMsg = {
    type: 'state',
    tick: 3,
    scores: [0, 0],
    shot_clock: 200,
    match_remaining: 1797,
    players: [{ pid: 0, team: 'home', x: 1, y: 1, facing: 0,
      scene: 'freeball', has_ball: false, busy: 0, action: null }],
    ball: { x: 7, y: 5, vx: 0, vy: 0, owner: null, in_flight: false },
    human: { pollable: true, mask },
  };
  return reduce(view, { kind: 'server', msg: state });
}

describe('input mapping', () => {
  it('direction key sends the matching move when legal', () => {
    const view = viewWithMask([true, true, true, true, true, false]);
    const mapper = new InputMapper();
    const msg = mapper.map('ArrowRight', view);
    expect(msg).toEqual({ type: 'action', action: 1 });
  });

  it('held combination synthesizes a diagonal move', () => {
    const view = viewWithMask([true, true, true, true, true, false]);
    const mapper = new InputMapper();
    mapper.keyDown('ArrowRight');
    const msg = mapper.map('ArrowUp', view);
    expect(msg).toEqual({ type: 'action', action: 2 }); // Move_NE
  });

  it('masked-out actions send nothing', () => {
    const view = viewWithMask([true, false, true, true, true, false]);
    const mapper = new InputMapper();
    expect(mapper.map('ArrowRight', view)).toBeNull();
    // Shoot is masked out; its palette hotkey must also be dead.
    expect(mapper.map('Digit2', view)).toBeNull();
  });

  it('palette hotkey fires the palette action', () => {
    const view = viewWithMask([true, true, true, true, true, false]);
    // Non-move palette ordering: Grab -> hotkey 1, ShootClose -> hotkey 2.
    const mapper = new InputMapper();
    const msg = mapper.map('Digit1', view);
    expect(msg).toEqual({ type: 'action', action: 4 });
  });

  it('unknown keys send nothing', () => {
    const view = viewWithMask([true, true, true, true, true, true]);
    const mapper = new InputMapper();
    expect(mapper.map('KeyQ', view)).toBeNull();
  });
});
