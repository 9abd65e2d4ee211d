// Gateway client: opens a session over HTTP, then binds a WebSocket to the
// session channel. Local echoes for sent text and pressed buttons are
// synthesized as inbound WireMessages so the log tells the whole story.

import { buttonFrame, parseWireMessage, textFrame } from "./protocol.js";
import type { WireMessage } from "./protocol.js";
import type { ConnectionState } from "./model.js";

// Minimal surface shared by the browser WebSocket and the "ws" package.
// Event parameters are deliberately loose; only .data is ever read.
export interface WebSocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export interface ClientEvents {
  onMessage(message: WireMessage): void;
  onState(state: ConnectionState, detail?: string): void;
}

export async function openSession(baseUrl: string): Promise<string> {
  const response = await fetch(`${baseUrl}/api/sessions`, { method: "POST" });
  if (response.status !== 201) {
    throw new Error(`session refused: HTTP ${response.status}`);
  }
  const body = (await response.json()) as { session_id?: string };
  if (!body.session_id) throw new Error("gateway returned no session_id");
  return body.session_id;
}

export function channelUrl(baseUrl: string, sessionId: string): string {
  return `${baseUrl.replace(/^http/, "ws")}/ws/sessions/${sessionId}`;
}

export class GatewayClient {
  readonly sessionId: string;
  private ws: WebSocketLike | null = null;
  private seq = 0;
  private state: ConnectionState = "connecting";

  constructor(
    private readonly baseUrl: string,
    sessionId: string,
    private readonly events: ClientEvents,
    private readonly wsFactory: WebSocketFactory,
  ) {
    this.sessionId = sessionId;
  }

  connect(): void {
    const ws = this.wsFactory(channelUrl(this.baseUrl, this.sessionId));
    this.ws = ws;
    ws.onopen = () => {
      this.state = "open";
      this.events.onState("open");
    };
    ws.onclose = () => {
      this.state = "closed";
      this.events.onState("closed");
    };
    ws.onerror = () => {
      if (this.state !== "closed") {
        this.state = "closed";
        this.events.onState("closed", "connection failed");
      }
    };
    ws.onmessage = (ev: { data: unknown }) => {
      const data = typeof ev.data === "string" ? ev.data : String(ev.data);
      try {
        this.events.onMessage(parseWireMessage(data));
      } catch {
        // a frame we cannot parse is dropped, never fatal
      }
    };
  }

  get connectionState(): ConnectionState {
    return this.state;
  }

  sendText(text: string): WireMessage {
    return this.emit(text, null);
  }

  pressButton(label: string): WireMessage {
    return this.emit(null, label);
  }

  private emit(text: string | null, label: string | null): WireMessage {
    if (this.ws === null || this.state !== "open") {
      throw new Error("channel is not open");
    }
    const seq = ++this.seq;
    const frame =
      text !== null ? textFrame(this.sessionId, seq, text) : buttonFrame(this.sessionId, seq, label!);
    this.ws.send(frame);
    const echo: WireMessage = {
      direction: "inbound",
      session_id: this.sessionId,
      seq,
      payload: text !== null ? { kind: "text", text } : { kind: "button", label: label! },
    };
    return echo;
  }

  close(): void {
    this.ws?.close();
  }
}
