// DOM construction for a BoardView. Values go in via textContent, never
// innerHTML, so server strings render verbatim.

import { BoardView, PolygonSketch, SlotCard } from "./board.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function slotCard(card: SlotCard): HTMLElement {
  const node = el("div", card.open ? "slot-card open" : "slot-card");
  node.dataset.index = String(card.index);
  node.appendChild(el("div", "slot-label", card.label));
  node.appendChild(
    el("div", card.value === "unset" ? "slot-value unset" : "slot-value",
      card.value),
  );
  if (card.zeroExcluded) {
    node.appendChild(el("span", "zero-badge", "≠ 0"));
  }
  return node;
}

function sketchSvg(sketch: PolygonSketch): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${sketch.width} ${sketch.height}`);
  svg.setAttribute("class", "polygon-sketch");
  if (sketch.vertices.length > 1) {
    const line = document.createElementNS(SVG_NS, "polyline");
    line.setAttribute("points", sketch.path);
    line.setAttribute("class", "hull");
    line.setAttribute("fill", "none");
    svg.appendChild(line);
  }
  for (const p of sketch.points) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(p.x));
    dot.setAttribute("cy", String(p.y));
    dot.setAttribute("r", "3");
    dot.setAttribute("class", "point");
    svg.appendChild(dot);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(p.x + 5));
    label.setAttribute("y", String(p.y - 5));
    label.setAttribute("class", "ord-label");
    label.textContent = p.label;
    svg.appendChild(label);
  }
  return svg;
}

export interface MoveFormHandles {
  indexSelect: HTMLSelectElement;
  valueInput: HTMLInputElement;
  submit: HTMLButtonElement;
}

/**
 * Replace root's contents with the view. Returns handles to the move form
 * (null when it is not the human's turn) so the app can wire the submit.
 */
export function renderBoard(
  root: HTMLElement,
  view: BoardView,
): MoveFormHandles | null {
  root.textContent = "";

  root.appendChild(el("div", "arena-descriptor", view.arenaLabel));
  root.appendChild(el("div", "turn-banner", view.banner));

  const row = el("div", "slot-row");
  for (const card of view.slots) row.appendChild(slotCard(card));
  root.appendChild(row);

  let handles: MoveFormHandles | null = null;
  if (view.humanToMove) {
    const form = el("form", "move-form");
    const indexSelect = document.createElement("select");
    indexSelect.className = "move-index";
    for (const card of view.slots) {
      if (!card.open) continue;
      const option = document.createElement("option");
      option.value = String(card.index);
      option.textContent = card.zeroExcluded
        ? `${card.label} (nonzero)`
        : card.label;
      indexSelect.appendChild(option);
    }
    const valueInput = document.createElement("input");
    valueInput.className = "move-value";
    valueInput.placeholder = "value";
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "play";
    form.append(indexSelect, valueInput, submit);
    root.appendChild(form);
    handles = { indexSelect, valueInput, submit };
  }

  if (view.polygon && !view.finished) {
    const box = el("div", "polygon-box");
    box.appendChild(el("div", "polygon-title", "Newton polygon so far"));
    box.appendChild(sketchSvg(view.polygon));
    root.appendChild(box);
  }

  const log = el("ul", "move-log");
  for (const line of view.moveLog) log.appendChild(el("li", "move", line));
  root.appendChild(log);

  if (view.result) {
    const panel = el("div", "result-panel");
    panel.appendChild(el("div", "result-headline", view.result.headline));
    if (view.result.witnesses.length > 0) {
      const list = el("ul", "witness-roots");
      for (const w of view.result.witnesses) {
        list.appendChild(el("li", "root", w));
      }
      panel.appendChild(list);
    }
    if (view.result.detail) {
      panel.appendChild(el("div", "result-detail", view.result.detail));
    }
    if (view.result.rootFound !== null) {
      panel.appendChild(el("div", "root-found",
        `root found: ${view.result.rootFound}`));
    }
    if (view.polygon) {
      panel.appendChild(sketchSvg(view.polygon));
    }
    root.appendChild(panel);
  }

  root.appendChild(el("div", "toast-area"));
  return handles;
}

/** Transient message in the board's toast area. */
export function showToast(root: HTMLElement, message: string): void {
  const area = root.querySelector(".toast-area");
  if (!area) return;
  const toast = el("div", "toast", message);
  area.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}
