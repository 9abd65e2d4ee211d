// Wire protocol for the Atreya session channel: line-delimited JSON
// envelopes {direction, session_id, seq, payload}. This module mirrors the
// gateway schema and is the only place that touches raw frames.

export interface TextPayload {
  kind: "text";
  text: string;
  error?: boolean;
}

export interface ButtonPayload {
  kind: "button";
  label: string;
}

export interface ButtonsPayload {
  kind: "buttons";
  labels: string[];
}

export interface ImagePayload {
  kind: "image";
  caption: string;
  png_b64: string;
}

export interface FilePayload {
  kind: "file";
  filename: string;
  media_type: string;
  data_b64: string;
  download_path?: string | null;
}

export type InboundPayload = TextPayload | ButtonPayload;
export type OutboundPayload = TextPayload | ButtonsPayload | ImagePayload | FilePayload;
export type Payload = InboundPayload | OutboundPayload;

export interface WireMessage {
  direction: "inbound" | "outbound";
  session_id: string;
  seq: number;
  payload: Payload;
}

export class ProtocolError extends Error {}

function fail(reason: string): never {
  throw new ProtocolError(reason);
}

function asString(value: unknown, field: string): string {
  if (typeof value !== "string") fail(`${field} must be a string`);
  return value;
}

function parsePayload(raw: unknown): Payload {
  if (typeof raw !== "object" || raw === null) fail("payload must be an object");
  const p = raw as Record<string, unknown>;
  switch (p.kind) {
    case "text":
      return { kind: "text", text: asString(p.text, "text"), error: p.error === true };
    case "button":
      return { kind: "button", label: asString(p.label, "label") };
    case "buttons": {
      if (!Array.isArray(p.labels)) fail("labels must be an array");
      return { kind: "buttons", labels: p.labels.map((l, i) => asString(l, `labels[${i}]`)) };
    }
    case "image":
      return {
        kind: "image",
        caption: asString(p.caption, "caption"),
        png_b64: asString(p.png_b64, "png_b64"),
      };
    case "file":
      return {
        kind: "file",
        filename: asString(p.filename, "filename"),
        media_type: asString(p.media_type, "media_type"),
        data_b64: asString(p.data_b64, "data_b64"),
        download_path: p.download_path == null ? null : asString(p.download_path, "download_path"),
      };
    default:
      fail(`unknown payload kind: ${String(p.kind)}`);
  }
}

export function parseWireMessage(raw: string): WireMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    fail("frame is not JSON");
  }
  if (typeof data !== "object" || data === null) fail("frame must be a JSON object");
  const m = data as Record<string, unknown>;
  if (m.direction !== "inbound" && m.direction !== "outbound") {
    fail(`bad direction: ${String(m.direction)}`);
  }
  if (typeof m.seq !== "number" || !Number.isInteger(m.seq) || m.seq < 1) {
    fail(`bad seq: ${String(m.seq)}`);
  }
  return {
    direction: m.direction,
    session_id: asString(m.session_id, "session_id"),
    seq: m.seq,
    payload: parsePayload(m.payload),
  };
}

export function textFrame(sessionId: string, seq: number, text: string): string {
  const message: WireMessage = {
    direction: "inbound",
    session_id: sessionId,
    seq,
    payload: { kind: "text", text },
  };
  return JSON.stringify(message);
}

export function buttonFrame(sessionId: string, seq: number, label: string): string {
  const message: WireMessage = {
    direction: "inbound",
    session_id: sessionId,
    seq,
    payload: { kind: "button", label },
  };
  return JSON.stringify(message);
}

// Decode base64 into bytes; null when the text is not valid base64.
export function decodeBase64(data: string): Uint8Array | null {
  if (!/^[A-Za-z0-9+/]*={0,2}$/.test(data) || data.length % 4 !== 0) return null;
  try {
    const binary = atob(data);
    const bytes = new Uint8Array(binary.length);
    for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
    return bytes;
  } catch {
    return null;
  }
}

const PNG_SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];

export function isPng(bytes: Uint8Array): boolean {
  return PNG_SIGNATURE.every((b, i) => bytes[i] === b);
}
