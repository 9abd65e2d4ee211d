// Bootstrap: one session per tab. State lives in a single ChatViewModel;
// every change re-renders the conversation from scratch.

import { GatewayClient, openSession } from "./client.js";
import { applyMessage, emptyModel, setConnection } from "./model.js";
import type { ChatViewModel } from "./model.js";
import { render } from "./render.js";

const BASE_URL = window.location.origin;

let model: ChatViewModel = emptyModel();
let client: GatewayClient | null = null;

const mount = document.getElementById("app")!;
const input = document.getElementById("input") as HTMLInputElement;
const send = document.getElementById("send") as HTMLButtonElement;

function update(next: ChatViewModel): void {
  model = next;
  const view = render(model, {
    onButton: (label) => {
      if (client === null) return;
      update(applyMessage(model, client.pressButton(label)));
    },
    onRetry: () => {
      void start();
    },
  });
  mount.replaceChildren(view);
  const stream = view.querySelector(".stream");
  if (stream !== null) stream.scrollTop = stream.scrollHeight;
}

function sendText(): void {
  const text = input.value.trim();
  if (text === "" || client === null) return;
  try {
    const echo = client.sendText(text);
    input.value = "";
    update(applyMessage(model, echo));
  } catch {
    update(setConnection(model, "closed", "not connected - message kept in the box"));
  }
}

async function start(): Promise<void> {
  update(setConnection(emptyModel(), "connecting"));
  try {
    const sessionId = await openSession(BASE_URL);
    client = new GatewayClient(
      BASE_URL,
      sessionId,
      {
        onMessage: (message) => update(applyMessage(model, message)),
        onState: (state, detail) =>
          update(setConnection(model, state, state === "closed" ? detail ?? "disconnected" : null)),
      },
      (url) => new WebSocket(url),
    );
    client.connect();
  } catch (err) {
    update(setConnection(model, "closed", `gateway unreachable: ${String(err)}`));
  }
}

send.onclick = sendText;
input.onkeydown = (ev) => {
  if (ev.key === "Enter") sendText();
};

void start();
