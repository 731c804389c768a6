// Client view state: a pure reducer over the server message history plus
// local input events. Replaying the same log always rebuilds the same view.

import type {
  AckMsg,
  CatalogEntry,
  EndMsg,
  HelloMsg,
  StateMsg,
  ServerMsg,
} from './protocol.js';

export interface PaletteEntry {
  id: number;
  name: string;
  legal: boolean;
  hotkey: string | null;
}

export interface FlashState {
  action: number;
  reason: string;
  tick: number; // view revision when the flash was raised
}

export interface ClientView {
  connection: 'connecting' | 'open' | 'closed';
  hello: HelloMsg | null;
  prev: StateMsg | null;
  current: StateMsg | null;
  palette: PaletteEntry[];
  pendingAction: number | null; // queued on the server, not yet started
  flash: FlashState | null; // rejected-action feedback
  end: EndMsg | null;
  lastError: string | null;
  revision: number;
}

export function initialView(): ClientView {
  return {
    connection: 'connecting',
    hello: null,
    prev: null,
    current: null,
    palette: [],
    pendingAction: null,
    flash: null,
    end: null,
    lastError: null,
    revision: 0,
  };
}

// Palette hotkeys are assigned to non-move actions in catalog order; moves
// are driven by the direction keys instead.
const HOTKEYS = ['1', '2', '3', '4', '5', '6', '7', '8', '9', '0'];

export function buildPalette(
  catalog: CatalogEntry[],
  mask: boolean[],
): PaletteEntry[] {
  let slot = 0;
  return catalog.map((entry) => {
    const isMove = entry.category === 'Move';
    let hotkey: string | null = null;
    if (!isMove && entry.category !== 'Idle' && slot < HOTKEYS.length) {
      hotkey = HOTKEYS[slot];
      slot += 1;
    }
    return {
      id: entry.id,
      name: entry.name,
      legal: mask[entry.id] ?? false,
      hotkey,
    };
  });
}

export type ViewEvent =
  | { kind: 'server'; msg: ServerMsg }
  | { kind: 'sent'; action: number }
  | { kind: 'socket'; state: 'open' | 'closed' };

export function reduce(view: ClientView, event: ViewEvent): ClientView {
  const next: ClientView = { ...view, revision: view.revision + 1 };
  if (event.kind === 'socket') {
    next.connection = event.state;
    return next;
  }
  if (event.kind === 'sent') {
    return next;
  }
  const msg = event.msg;
  switch (msg.type) {
    case 'hello':
      next.hello = msg;
      next.connection = 'open';
      break;
    case 'state':
      next.prev = view.current;
      next.current = msg;
      if (next.hello) {
        next.palette = buildPalette(next.hello.catalog, msg.human.mask);
      }
      if (msg.human.pollable) {
        next.pendingAction = null;
      }
      break;
    case 'ack':
      handleAck(next, msg);
      break;
    case 'error':
      next.lastError = msg.message;
      break;
    case 'end':
      next.end = msg;
      break;
  }
  return next;
}

function handleAck(view: ClientView, ack: AckMsg): void {
  if (ack.status === 'rejected') {
    view.flash = {
      action: ack.action,
      reason: ack.reason ?? 'rejected',
      tick: view.revision,
    };
    if (view.pendingAction === ack.action) {
      view.pendingAction = null;
    }
  } else if (ack.status === 'queued') {
    view.pendingAction = ack.action;
  } else {
    view.pendingAction = ack.action;
  }
}
