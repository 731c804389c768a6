// Top-down 2D rendering through a draw-op interface, so tests can record the
// op stream and digest frames without a real canvas.

import type { ClientView } from './state.js';
import type { PlayerState } from './protocol.js';

export interface DrawOps {
  clear(color: string): void;
  line(x1: number, y1: number, x2: number, y2: number, color: string, width: number): void;
  circle(x: number, y: number, r: number, color: string, fill: boolean): void;
  rect(x: number, y: number, w: number, h: number, color: string, fill: boolean): void;
  text(x: number, y: number, s: string, color: string, size: number): void;
}

export const VIEW_W = 750;
export const VIEW_H = 640;
const COURT_TOP = 60;
const SCALE = 46; // pixels per meter for a 15 m court width

function px(xMeters: number): number {
  return 30 + xMeters * SCALE;
}

function py(yMeters: number): number {
  return COURT_TOP + yMeters * SCALE;
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

const TEAM_COLORS = { home: '#2563eb', away: '#dc2626' } as const;

export function render(view: ClientView, alpha: number, d: DrawOps): void {
  d.clear('#0b0f14');
  if (!view.hello) {
    d.text(VIEW_W / 2 - 60, VIEW_H / 2, 'connecting...', '#9ca3af', 16);
    return;
  }
  const court = view.hello.court;
  drawCourt(d, court.width, court.length, court.basket, court.arc);
  const state = view.current;
  if (!state) {
    return;
  }
  const prevPlayers = new Map<number, PlayerState>();
  if (view.prev) {
    for (const p of view.prev.players) {
      prevPlayers.set(p.pid, p);
    }
  }
  for (const p of state.players) {
    const q = prevPlayers.get(p.pid);
    const x = q ? lerp(q.x, p.x, alpha) : p.x;
    const y = q ? lerp(q.y, p.y, alpha) : p.y;
    const color = TEAM_COLORS[p.team];
    d.circle(px(x), py(y), 10, color, true);
    if (p.pid === view.hello.human_pid) {
      d.circle(px(x), py(y), 13, '#fbbf24', false);
    }
    if (p.has_ball) {
      d.circle(px(x), py(y), 5, '#f97316', true);
    }
    if (p.busy > 0) {
      d.rect(px(x) - 10, py(y) - 18, 20 * Math.min(1, p.busy / 6), 3,
        '#a3e635', true);
    }
    d.text(px(x) - 4, py(y) + 4, String(p.pid), '#f8fafc', 10);
  }
  if (state.ball.owner === null) {
    const bq = view.prev ? view.prev.ball : state.ball;
    const bx = lerp(bq.x, state.ball.x, alpha);
    const by = lerp(bq.y, state.ball.y, alpha);
    d.circle(px(bx), py(by), 5, '#f97316', true);
  }
  drawHud(view, d, state.tick);
  drawPalette(view, d);
  if (view.flash) {
    d.text(20, VIEW_H - 14,
      `action ${view.flash.action} rejected: ${view.flash.reason}`,
      '#f87171', 12);
  }
  if (view.lastError) {
    d.text(260, VIEW_H - 14, view.lastError, '#fbbf24', 11);
  }
  if (view.connection === 'closed') {
    d.rect(0, 0, VIEW_W, 24, '#7f1d1d', true);
    d.text(12, 16, 'disconnected - retrying', '#fecaca', 12);
  }
  if (view.end) {
    drawEndModal(view, d);
  }
}

function drawCourt(d: DrawOps, width: number, length: number,
  basket: [number, number], arc: number): void {
  d.rect(px(0), py(0), width * SCALE, length * SCALE, '#14532d', true);
  d.rect(px(0), py(0), width * SCALE, length * SCALE, '#e5e7eb', false);
  d.circle(px(basket[0]), py(basket[1]), 6, '#f8fafc', false);
  d.circle(px(basket[0]), py(basket[1]), arc * SCALE, '#e5e7eb', false);
}

function drawHud(view: ClientView, d: DrawOps, tick: number): void {
  const s = view.current;
  if (!s) {
    return;
  }
  d.text(30, 24, `HOME ${s.scores[0]} : ${s.scores[1]} AWAY`, '#f8fafc', 16);
  d.text(30, 44, `tick ${tick}  shot ${(s.shot_clock / 10).toFixed(1)}s  ` +
    `match ${(s.match_remaining / 10).toFixed(1)}s`, '#9ca3af', 12);
  if (view.pendingAction !== null) {
    d.rect(430, 8, 140, 18, '#1e3a8a', true);
    d.text(436, 21, `pending: ${view.pendingAction}`, '#bfdbfe', 11);
  }
}

function drawPalette(view: ClientView, d: DrawOps): void {
  const baseY = COURT_TOP + 11.4 * SCALE + 18;
  let col = 0;
  for (const entry of view.palette) {
    if (!entry.legal) {
      continue;
    }
    const x = 30 + (col % 5) * 140;
    const y = baseY + Math.floor(col / 5) * 22;
    const label = entry.hotkey ? `[${entry.hotkey}] ${entry.name}` : entry.name;
    d.text(x, y, label, '#a3e635', 11);
    col += 1;
  }
}

function drawEndModal(view: ClientView, d: DrawOps): void {
  const end = view.end;
  if (!end) {
    return;
  }
  d.rect(VIEW_W / 2 - 140, VIEW_H / 2 - 50, 280, 100, '#111827', true);
  d.rect(VIEW_W / 2 - 140, VIEW_H / 2 - 50, 280, 100, '#f8fafc', false);
  d.text(VIEW_W / 2 - 110, VIEW_H / 2 - 16,
    `final ${end.scores[0]} : ${end.scores[1]}`, '#f8fafc', 18);
  d.text(VIEW_W / 2 - 110, VIEW_H / 2 + 14, `winner: ${end.winner}`,
    '#a3e635', 14);
}

// Deterministic frame digest: FNV-1a over the recorded op stream.
export class RecordingDraw implements DrawOps {
  ops: string[] = [];

  clear(color: string): void {
    this.ops.push(`clear|${color}`);
  }

  line(x1: number, y1: number, x2: number, y2: number, color: string,
    width: number): void {
    this.ops.push(`line|${r(x1)}|${r(y1)}|${r(x2)}|${r(y2)}|${color}|${width}`);
  }

  circle(x: number, y: number, radius: number, color: string,
    fill: boolean): void {
    this.ops.push(`circle|${r(x)}|${r(y)}|${r(radius)}|${color}|${fill}`);
  }

  rect(x: number, y: number, w: number, h: number, color: string,
    fill: boolean): void {
    this.ops.push(`rect|${r(x)}|${r(y)}|${r(w)}|${r(h)}|${color}|${fill}`);
  }

  text(x: number, y: number, s: string, color: string, size: number): void {
    this.ops.push(`text|${r(x)}|${r(y)}|${s}|${color}|${size}`);
  }

  digest(): string {
    let h = 0x811c9dc5;
    for (const op of this.ops) {
      for (let i = 0; i < op.length; i += 1) {
        h ^= op.charCodeAt(i);
        h = Math.imul(h, 0x01000193) >>> 0;
      }
      h ^= 10;
      h = Math.imul(h, 0x01000193) >>> 0;
    }
    return h.toString(16).padStart(8, '0');
  }
}

function r(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}
