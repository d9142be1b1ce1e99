/** Render a Screen into the page and wire its inputs back to handlers. */

import type { Screen, ScreenNode } from "./screen.js";

export interface ScreenHandlers {
  onButton(id: string, inputs: Record<string, string>): void;
}

export function renderToDom(
  root: HTMLElement,
  screen: Screen,
  handlers: ScreenHandlers,
): void {
  root.innerHTML = "";
  root.dataset.scene = screen.scene;
  const inputs: Record<string, HTMLInputElement | HTMLSelectElement> = {};

  const collect = (): Record<string, string> =>
    Object.fromEntries(Object.entries(inputs).map(([id, el]) => [id, el.value]));

  for (const node of screen.nodes) {
    root.appendChild(renderNode(node, inputs, collect, handlers));
  }
}

function renderNode(
  node: ScreenNode,
  inputs: Record<string, HTMLInputElement | HTMLSelectElement>,
  collect: () => Record<string, string>,
  handlers: ScreenHandlers,
): HTMLElement {
  switch (node.kind) {
    case "heading": {
      const el = document.createElement("h2");
      el.textContent = node.text;
      return el;
    }
    case "note": {
      const el = document.createElement("p");
      el.className = "note";
      el.textContent = node.text;
      return el;
    }
    case "error": {
      const el = document.createElement("p");
      el.className = "error";
      el.setAttribute("role", "alert");
      el.textContent = node.text;
      return el;
    }
    case "stat": {
      const el = document.createElement("div");
      el.className = "stat";
      const label = document.createElement("span");
      label.textContent = node.label;
      const value = document.createElement("strong");
      value.textContent = node.value;
      el.append(label, value);
      return el;
    }
    case "dialogue": {
      const el = document.createElement("div");
      el.className = "dialogue";
      const speaker = document.createElement("b");
      speaker.textContent = `${node.speaker}: `;
      const text = document.createElement("span");
      text.textContent = node.text;
      el.append(speaker, text);
      return el;
    }
    case "chart": {
      // textual sparkline table; the numbers matter, not the pixels
      const el = document.createElement("table");
      el.className = "chart";
      const caption = el.createCaption();
      caption.textContent = node.label;
      const head = el.insertRow();
      const body = el.insertRow();
      node.weeks.forEach((week, i) => {
        const th = document.createElement("th");
        th.textContent = `w${week}`;
        head.appendChild(th);
        const td = body.insertCell();
        td.textContent = String(node.values[i]);
      });
      return el;
    }
    case "field": {
      const wrap = document.createElement("label");
      wrap.className = "fieldwrap";
      wrap.textContent = node.label;
      const input = document.createElement("input");
      input.id = node.id;
      input.value = node.value;
      inputs[node.id] = input;
      wrap.appendChild(input);
      return wrap;
    }
    case "choice": {
      const wrap = document.createElement("label");
      wrap.className = "fieldwrap";
      wrap.textContent = node.label;
      const select = document.createElement("select");
      select.id = node.id;
      for (const option of node.options) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option.replace("_", " ");
        if (option === node.selected) el.selected = true;
        select.appendChild(el);
      }
      inputs[node.id] = select;
      wrap.appendChild(select);
      return wrap;
    }
    case "button": {
      const el = document.createElement("button");
      el.id = node.id;
      el.textContent = node.label;
      el.addEventListener("click", () => handlers.onButton(node.id, collect()));
      return el;
    }
  }
}
