// DOM rendering: a pure function of the view model. The whole conversation
// element is rebuilt on every call; no incremental mutation, which keeps
// render(model) snapshot-stable for any given message log.

import { decodeBase64, isPng } from "./protocol.js";
import type { FilePayload, ImagePayload, Payload, WireMessage } from "./protocol.js";
import type { ChatViewModel } from "./model.js";

export interface Handlers {
  onButton(label: string): void;
  onRetry(): void;
}

const NO_HANDLERS: Handlers = { onButton: () => undefined, onRetry: () => undefined };

export function render(model: ChatViewModel, handlers: Handlers = NO_HANDLERS): HTMLElement {
  const root = document.createElement("div");
  root.className = "chat";

  if (model.banner !== null) {
    root.appendChild(renderBanner(model.banner, handlers));
  }

  const stream = document.createElement("div");
  stream.className = "stream";
  for (const message of model.messages) {
    const bubble = renderMessage(message);
    if (bubble !== null) stream.appendChild(bubble);
  }
  root.appendChild(stream);

  if (model.activeButtons !== null && model.connectionState === "open") {
    root.appendChild(renderGrid(model.activeButtons, handlers));
  }
  return root;
}

function renderBanner(text: string, handlers: Handlers): HTMLElement {
  const banner = document.createElement("div");
  banner.className = "banner";
  const label = document.createElement("span");
  label.textContent = text;
  banner.appendChild(label);
  const retry = document.createElement("button");
  retry.className = "retry";
  retry.textContent = "Retry";
  retry.onclick = () => handlers.onRetry();
  banner.appendChild(retry);
  return banner;
}

function renderMessage(message: WireMessage): HTMLElement | null {
  if (message.direction === "inbound") {
    return renderUserBubble(message.payload);
  }
  const payload = message.payload;
  switch (payload.kind) {
    case "text": {
      const bubble = document.createElement("div");
      bubble.className = payload.error ? "msg bot error" : "msg bot";
      bubble.textContent = payload.text;
      return bubble;
    }
    case "image":
      return renderImageCard(payload);
    case "file":
      return renderFileCard(payload);
    case "buttons":
      return null; // grids render once, below the stream
    default:
      return null;
  }
}

function renderUserBubble(payload: Payload): HTMLElement {
  const bubble = document.createElement("div");
  bubble.className = "msg user";
  bubble.textContent = payload.kind === "button" ? payload.label : (payload as { text: string }).text;
  return bubble;
}

function renderImageCard(payload: ImagePayload): HTMLElement {
  const card = document.createElement("figure");
  card.className = "msg bot image-card";

  const bytes = decodeBase64(payload.png_b64);
  if (bytes !== null && isPng(bytes)) {
    const img = document.createElement("img");
    img.src = `data:image/png;base64,${payload.png_b64}`;
    img.alt = firstLine(payload.caption);
    card.appendChild(img);
  } else {
    const placeholder = document.createElement("div");
    placeholder.className = "image-placeholder";
    placeholder.textContent = "image unavailable";
    card.appendChild(placeholder);
  }

  const caption = document.createElement("figcaption");
  caption.textContent = payload.caption;
  card.appendChild(caption);
  return card;
}

function renderFileCard(payload: FilePayload): HTMLElement {
  const card = document.createElement("div");
  card.className = "msg bot file-card";
  const link = document.createElement("a");
  link.className = "download";
  link.textContent = payload.filename;
  link.setAttribute("download", payload.filename);
  if (payload.download_path) {
    link.href = payload.download_path;
  } else {
    link.href = `data:${payload.media_type};base64,${payload.data_b64}`;
  }
  card.appendChild(link);
  return card;
}

// The menu renders as a two-column grid of tappable buttons.
function renderGrid(labels: string[], handlers: Handlers): HTMLElement {
  const grid = document.createElement("div");
  grid.className = "button-grid";
  grid.style.display = "grid";
  grid.style.gridTemplateColumns = "repeat(2, 1fr)";
  for (const label of labels) {
    const button = document.createElement("button");
    button.className = "grid-button";
    button.textContent = label;
    button.onclick = () => handlers.onButton(label);
    grid.appendChild(button);
  }
  return grid;
}

function firstLine(text: string): string {
  const index = text.indexOf("\n");
  return index === -1 ? text : text.slice(0, index);
}
