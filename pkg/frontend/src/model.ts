// Chat view model: a pure reduction of the WireMessage log. The renderer
// consumes this and nothing else, so replaying a recorded log reproduces
// the exact same view.

import type { ButtonsPayload, WireMessage } from "./protocol.js";

export type ConnectionState = "connecting" | "open" | "closed";

export interface ChatViewModel {
  messages: WireMessage[];
  activeButtons: string[] | null;
  connectionState: ConnectionState;
  banner: string | null;
}

export function emptyModel(): ChatViewModel {
  return { messages: [], activeButtons: null, connectionState: "connecting", banner: null };
}

function messageKey(m: WireMessage): string {
  return `${m.session_id}/${m.direction}/${m.seq}`;
}

// Insert keeping per-direction seq order; duplicates (same session,
// direction, seq) are dropped. Inbound and outbound number independently,
// so ordering is maintained within each direction while preserving the
// arrival interleaving between them.
export function applyMessage(model: ChatViewModel, message: WireMessage): ChatViewModel {
  const key = messageKey(message);
  if (model.messages.some((m) => messageKey(m) === key)) return model;

  const messages = [...model.messages];
  let at = messages.length;
  while (at > 0) {
    const prev = messages[at - 1]!;
    if (prev.direction === message.direction && prev.session_id === message.session_id) {
      if (prev.seq > message.seq) {
        at -= 1;
        continue;
      }
      break;
    }
    break;
  }
  messages.splice(at, 0, message);

  return { ...model, messages, activeButtons: latestButtons(messages) };
}

function latestButtons(messages: WireMessage[]): string[] | null {
  let best: { seq: number; payload: ButtonsPayload } | null = null;
  for (const m of messages) {
    if (m.direction !== "outbound" || m.payload.kind !== "buttons") continue;
    if (best === null || m.seq > best.seq) best = { seq: m.seq, payload: m.payload };
  }
  return best ? [...best.payload.labels] : null;
}

export function setConnection(
  model: ChatViewModel,
  state: ConnectionState,
  banner: string | null = null,
): ChatViewModel {
  return { ...model, connectionState: state, banner };
}

export function applyAll(messages: WireMessage[]): ChatViewModel {
  let model = emptyModel();
  for (const message of messages) model = applyMessage(model, message);
  return model;
}
