// Wire schema for the live-match bridge. Mirrors the server exactly; the
// client renders only what the server sends and never simulates rules.

export interface CourtSpec {
  width: number;
  length: number;
  basket: [number, number];
  arc: number;
}

export interface RosterEntry {
  pid: number;
  team: 'home' | 'away';
  role: string;
}

export interface CatalogEntry {
  id: number;
  name: string;
  category: string;
  duration: number;
}

export interface HelloMsg {
  type: 'hello';
  court: CourtSpec;
  players: RosterEntry[];
  human_pid: number;
  catalog: CatalogEntry[];
  speed: number;
  match_ticks: number;
  shot_clock_ticks: number;
}

export interface PlayerState {
  pid: number;
  team: 'home' | 'away';
  x: number;
  y: number;
  facing: number;
  scene: string;
  has_ball: boolean;
  busy: number;
  action: number | null;
}

export interface BallState {
  x: number;
  y: number;
  vx: number;
  vy: number;
  owner: number | null;
  in_flight: boolean;
}

export interface StateMsg {
  type: 'state';
  tick: number;
  scores: [number, number];
  shot_clock: number;
  match_remaining: number;
  players: PlayerState[];
  ball: BallState;
  human: { pollable: boolean; mask: boolean[] };
}

export interface AckMsg {
  type: 'ack';
  action: number;
  status: 'accepted' | 'rejected' | 'queued';
  reason?: string;
}

export interface ErrorMsg {
  type: 'error';
  message: string;
}

export interface EndMsg {
  type: 'end';
  scores: [number, number];
  winner: 'home' | 'away' | 'draw';
}

export interface ActionMsg {
  type: 'action';
  action: number;
}

export type ServerMsg = HelloMsg | StateMsg | AckMsg | ErrorMsg | EndMsg;

export function parseServerMsg(raw: string): ServerMsg {
  const msg = JSON.parse(raw) as { type?: string };
  switch (msg.type) {
    case 'hello':
    case 'state':
    case 'ack':
    case 'error':
    case 'end':
      return msg as ServerMsg;
    default:
      throw new Error(`unknown server message type: ${String(msg.type)}`);
  }
}
