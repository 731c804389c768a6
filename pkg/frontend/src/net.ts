// WebSocket wiring with auto-retry. The reducer owns all state; this module
// only forwards events.

import type { ActionMsg, ServerMsg } from './protocol.js';
import { parseServerMsg } from './protocol.js';

export interface NetCallbacks {
  onMessage(msg: ServerMsg): void;
  onState(state: 'open' | 'closed'): void;
}

export class Connection {
  private ws: WebSocket | null = null;
  private retryMs = 500;
  private closedByUser = false;

  constructor(private readonly url: string,
    private readonly callbacks: NetCallbacks) {}

  connect(): void {
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => {
      this.retryMs = 500;
      this.callbacks.onState('open');
    };
    this.ws.onmessage = (ev) => {
      try {
        this.callbacks.onMessage(parseServerMsg(String(ev.data)));
      } catch (err) {
        console.warn('dropping malformed server frame', err);
      }
    };
    this.ws.onclose = () => {
      this.callbacks.onState('closed');
      if (!this.closedByUser) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
  }

  send(msg: ActionMsg): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(msg));
    }
  }

  close(): void {
    this.closedByUser = true;
    this.ws?.close();
  }
}
