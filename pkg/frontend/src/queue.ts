/** Queue list rendering.
 *
 * A pure function of the server payload plus local review marks: items
 * appear exactly in payload order (the server already ranks by
 * descending probability), each with a status chip, and clicking one
 * selects it. No sorting, filtering, or deduplication happens here.
 */

import type { QueueItem, QueuePayload } from "./types.js";

export interface QueueHandlers {
  onSelect(id: string): void;
}

function chip(doc: Document, reviewed: boolean): HTMLElement {
  const span = doc.createElement("span");
  span.className = reviewed ? "chip chip-reviewed" : "chip chip-unreviewed";
  span.textContent = reviewed ? "reviewed" : "unreviewed";
  return span;
}

function row(
  doc: Document,
  item: QueueItem,
  reviewed: boolean,
  selected: boolean,
  handlers: QueueHandlers,
): HTMLElement {
  const li = doc.createElement("li");
  li.className = "queue-item" + (selected ? " selected" : "");
  li.dataset["id"] = item.id;

  const prob = doc.createElement("span");
  prob.className = "prob";
  prob.textContent = item.probability.toFixed(3);
  li.appendChild(prob);

  const text = doc.createElement("span");
  text.className = "snippet";
  text.textContent =
    item.text.length > 90 ? item.text.slice(0, 90) + "…" : item.text;
  li.appendChild(text);

  li.appendChild(chip(doc, reviewed));

  const button = doc.createElement("button");
  button.type = "button";
  button.className = "open";
  button.textContent = "open";
  button.addEventListener("click", () => handlers.onSelect(item.id));
  li.appendChild(button);
  return li;
}

export function renderQueue(
  doc: Document,
  payload: QueuePayload,
  reviewed: ReadonlySet<string>,
  selectedId: string | null,
  handlers: QueueHandlers,
): HTMLElement {
  const section = doc.createElement("section");
  section.className = "queue";

  const heading = doc.createElement("h2");
  heading.textContent = `Review queue — ${payload.total_unreviewed} unreviewed`;
  section.appendChild(heading);

  if (payload.items.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "Queue is empty — nothing awaiting review.";
    section.appendChild(empty);
    return section;
  }

  const list = doc.createElement("ol");
  list.className = "queue-list";
  for (const item of payload.items) {
    list.appendChild(
      row(doc, item, reviewed.has(item.id), item.id === selectedId, handlers),
    );
  }
  section.appendChild(list);
  return section;
}
