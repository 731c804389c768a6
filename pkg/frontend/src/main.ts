// Browser entry point: canvas + websocket + keyboard. Server address comes
// from the ?server= query parameter.

import { Connection } from './net.js';
import { InputMapper } from './input.js';
import { render, VIEW_H, VIEW_W, type DrawOps } from './render.js';
import { initialView, reduce, type ClientView } from './state.js';

class CanvasDraw implements DrawOps {
  constructor(private readonly ctx: CanvasRenderingContext2D) {}

  clear(color: string): void {
    this.ctx.fillStyle = color;
    this.ctx.fillRect(0, 0, VIEW_W, VIEW_H);
  }

  line(x1: number, y1: number, x2: number, y2: number, color: string,
    width: number): void {
    this.ctx.strokeStyle = color;
    this.ctx.lineWidth = width;
    this.ctx.beginPath();
    this.ctx.moveTo(x1, y1);
    this.ctx.lineTo(x2, y2);
    this.ctx.stroke();
  }

  circle(x: number, y: number, r: number, color: string, fill: boolean): void {
    this.ctx.beginPath();
    this.ctx.arc(x, y, r, 0, Math.PI * 2);
    if (fill) {
      this.ctx.fillStyle = color;
      this.ctx.fill();
    } else {
      this.ctx.strokeStyle = color;
      this.ctx.lineWidth = 1.5;
      this.ctx.stroke();
    }
  }

  rect(x: number, y: number, w: number, h: number, color: string,
    fill: boolean): void {
    if (fill) {
      this.ctx.fillStyle = color;
      this.ctx.fillRect(x, y, w, h);
    } else {
      this.ctx.strokeStyle = color;
      this.ctx.lineWidth = 1.5;
      this.ctx.strokeRect(x, y, w, h);
    }
  }

  text(x: number, y: number, s: string, color: string, size: number): void {
    this.ctx.fillStyle = color;
    this.ctx.font = `${size}px monospace`;
    this.ctx.fillText(s, x, y);
  }
}

function serverUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('server') ?? 'ws://127.0.0.1:8765';
}

export function start(): void {
  const canvas = document.getElementById('court') as HTMLCanvasElement;
  canvas.width = VIEW_W;
  canvas.height = VIEW_H;
  const ctx = canvas.getContext('2d');
  if (!ctx) {
    throw new Error('canvas 2d context unavailable');
  }
  const draw = new CanvasDraw(ctx);
  let view: ClientView = initialView();
  let lastStateAt = performance.now();
  let tickMs = 100;

  const conn = new Connection(serverUrl(), {
    onMessage(msg) {
      if (msg.type === 'hello' && msg.speed > 0) {
        tickMs = 1000 / msg.speed;
      }
      if (msg.type === 'state') {
        lastStateAt = performance.now();
      }
      view = reduce(view, { kind: 'server', msg });
    },
    onState(state) {
      view = reduce(view, { kind: 'socket', state });
    },
  });
  conn.connect();

  const input = new InputMapper();
  window.addEventListener('keydown', (ev) => {
    const msg = input.map(ev.code, view);
    if (msg) {
      conn.send(msg);
      view = reduce(view, { kind: 'sent', action: msg.action });
      ev.preventDefault();
    }
  });
  window.addEventListener('keyup', (ev) => input.keyUp(ev.code));

  const frame = () => {
    const alpha = Math.min(1, (performance.now() - lastStateAt) / tickMs);
    render(view, alpha, draw);
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

start();
