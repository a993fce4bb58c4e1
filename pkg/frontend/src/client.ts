/** Request/reply protocol client. The server answers messages strictly in
 * receipt order, so a FIFO of pending resolvers is a complete pairing. Works
 * over any socket exposing send + message/close callbacks (browser WebSocket
 * or the `ws` package). */

import type { ClientMessage, ServerMessage, StateMessage } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";
import { SessionMirror } from "./mirror.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "message", listener: (event: { data: unknown }) => void): void;
  addEventListener(type: "close", listener: () => void): void;
  addEventListener(type: "open", listener: () => void): void;
}

export class ProtocolError extends Error {}

export class ProtocolClient {
  readonly mirror = new SessionMirror();
  private pending: Array<{
    resolve: (msg: ServerMessage) => void;
    reject: (err: Error) => void;
  }> = [];

  constructor(private readonly socket: SocketLike) {
    socket.addEventListener("message", (event) => {
      const waiter = this.pending.shift();
      if (!waiter) return; // unsolicited frame: protocol never sends these
      try {
        waiter.resolve(parseServerMessage(String(event.data)));
      } catch (err) {
        waiter.reject(err instanceof Error ? err : new Error(String(err)));
      }
    });
    socket.addEventListener("close", () => {
      for (const waiter of this.pending.splice(0)) {
        waiter.reject(new ProtocolError("connection closed"));
      }
    });
  }

  /** Send one message and await its reply; state replies fold into mirror. */
  async request(msg: ClientMessage): Promise<StateMessage> {
    const reply = await new Promise<ServerMessage>((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.socket.send(JSON.stringify(msg));
    });
    if (reply.type === "error") {
      throw new ProtocolError(reply.msg);
    }
    if (msg.type === "init" || msg.type === "reset") {
      this.mirror.reset();
    }
    this.mirror.apply(reply);
    return reply;
  }

  close(): void {
    this.socket.close();
  }
}

/** Await a socket's open event (no-op contract for already-open sockets
 * should be handled by the caller). */
export function whenOpen(socket: SocketLike): Promise<void> {
  return new Promise((resolve) => socket.addEventListener("open", () => resolve()));
}
