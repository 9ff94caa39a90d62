/** The review card: one queued item plus the judgment form.
 *
 * All form logic lives in the scheme module; this component only renders
 * the current FormState and reports user intent upward. Disabled
 * controls mirror the scheme exactly: targets are untickable while the
 * toxic flag is set, and submit stays disabled until the state is a
 * valid judgment.
 */

import {
  FormState,
  TARGETS,
  canSubmit,
  setLabel,
  setToxic,
  targetsEnabled,
  toggleTarget,
  toxicEnabled,
} from "./scheme.js";
import type { QueueItem } from "./types.js";

export interface ReviewCardProps {
  item: QueueItem;
  form: FormState;
  submitting: boolean;
  error: string | null;
  onForm(next: FormState): void;
  onSubmit(): void;
}

function field(doc: Document, label: string, value: string): HTMLElement {
  const dt = doc.createElement("dt");
  dt.textContent = label;
  const dd = doc.createElement("dd");
  dd.textContent = value;
  const wrap = doc.createElement("div");
  wrap.className = "meta-field";
  wrap.appendChild(dt);
  wrap.appendChild(dd);
  return wrap;
}

export function renderReviewCard(
  doc: Document,
  props: ReviewCardProps,
): HTMLElement {
  const { item, form } = props;
  const card = doc.createElement("article");
  card.className = "review-card";
  card.dataset["id"] = item.id;

  const text = doc.createElement("blockquote");
  text.className = "item-text";
  text.textContent = item.text;
  card.appendChild(text);

  const meta = doc.createElement("dl");
  meta.className = "item-meta";
  meta.appendChild(field(doc, "source", item.source));
  meta.appendChild(field(doc, "language", item.language));
  meta.appendChild(field(doc, "machine score", item.probability.toFixed(3)));
  if (item.weak_label !== null) {
    meta.appendChild(
      field(doc, "machine label", item.weak_label === 1 ? "hate speech" : "ok"),
    );
  }
  card.appendChild(meta);

  const context = item.metadata?.["context"];
  if (typeof context === "string" && context) {
    const aside = doc.createElement("aside");
    aside.className = "item-context";
    aside.textContent = context;
    card.appendChild(aside);
  }

  const formEl = doc.createElement("form");
  formEl.className = "review-form";
  formEl.addEventListener("submit", (event) => {
    event.preventDefault();
    if (canSubmit(form) && !props.submitting) props.onSubmit();
  });

  // label radios
  const labelRow = doc.createElement("fieldset");
  labelRow.className = "label-row";
  for (const value of [1, 0] as const) {
    const wrap = doc.createElement("label");
    const radio = doc.createElement("input");
    radio.type = "radio";
    radio.name = "label";
    radio.value = String(value);
    radio.checked = form.label === value;
    radio.addEventListener("change", () =>
      props.onForm(setLabel(form, value)),
    );
    wrap.appendChild(radio);
    wrap.appendChild(
      doc.createTextNode(value === 1 ? " hate speech" : " not hate speech"),
    );
    labelRow.appendChild(wrap);
  }
  formEl.appendChild(labelRow);

  // toxic flag
  const toxicWrap = doc.createElement("label");
  toxicWrap.className = "toxic-row";
  const toxicBox = doc.createElement("input");
  toxicBox.type = "checkbox";
  toxicBox.name = "toxic";
  toxicBox.checked = form.toxic;
  toxicBox.disabled = !toxicEnabled(form);
  toxicBox.addEventListener("change", () =>
    props.onForm(setToxic(form, toxicBox.checked)),
  );
  toxicWrap.appendChild(toxicBox);
  toxicWrap.appendChild(
    doc.createTextNode(" toxic (insulting, no concrete target group)"),
  );
  formEl.appendChild(toxicWrap);

  // target checkboxes, fixed order
  const targetsRow = doc.createElement("fieldset");
  targetsRow.className = "targets-row";
  const legend = doc.createElement("legend");
  legend.textContent = "target groups";
  targetsRow.appendChild(legend);
  const enabled = targetsEnabled(form);
  for (const target of TARGETS) {
    const wrap = doc.createElement("label");
    const box = doc.createElement("input");
    box.type = "checkbox";
    box.name = "target";
    box.value = target;
    box.checked = form.targets.includes(target);
    box.disabled = !enabled;
    box.addEventListener("change", () =>
      props.onForm(toggleTarget(form, target)),
    );
    wrap.appendChild(box);
    wrap.appendChild(doc.createTextNode(" " + target));
    targetsRow.appendChild(wrap);
  }
  formEl.appendChild(targetsRow);

  if (props.error) {
    const error = doc.createElement("p");
    error.className = "form-error";
    error.textContent = props.error;
    formEl.appendChild(error);
  }

  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.className = "submit";
  submit.textContent = props.submitting ? "submitting…" : "submit review";
  submit.disabled = !canSubmit(form) || props.submitting;
  formEl.appendChild(submit);

  card.appendChild(formEl);
  return card;
}
