/** Wire types for the simulation session protocol (JSON over WebSocket).
 * Shapes mirror the server exactly; see the backend README for semantics. */

export interface SimParams {
  n?: number;
  e?: number;
  epsilon?: number;
  mu?: number;
  p?: number;
  q?: number;
  l?: number;
  strategy?: "random" | "repost" | "recommendation";
  t_max?: number;
  seed?: number;
}

/** Subset of SimParams the server accepts mid-session. */
export type MutableParams = Pick<
  SimParams,
  "epsilon" | "mu" | "p" | "q" | "l" | "strategy"
>;

export type ClientMessage =
  | { type: "init"; params: SimParams }
  | { type: "step"; n: number }
  | { type: "set_params"; params: MutableParams }
  | { type: "reset"; seed: number }
  | { type: "snapshot" };

export type Edge = [number, number];

export interface Metrics {
  entropy: number;
  peaks: number;
  segregation: number | null;
  components: number;
}

export interface StateMessage {
  type: "state";
  t: number;
  opinions: number[];
  edges_added: Edge[];
  edges_removed: Edge[];
  metrics: Metrics;
}

export interface ErrorMessage {
  type: "error";
  msg: string;
}

export type ServerMessage = StateMessage | ErrorMessage;

export function parseServerMessage(text: string): ServerMessage {
  const msg = JSON.parse(text) as ServerMessage;
  if (msg.type !== "state" && msg.type !== "error") {
    throw new Error(`unexpected message type: ${JSON.stringify(msg)}`);
  }
  return msg;
}
