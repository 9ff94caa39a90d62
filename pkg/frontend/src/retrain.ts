/** Retrain status panel and its 5-second poller.
 *
 * The view model is derived purely from the status and models payloads,
 * so the panel re-renders from each poll without a page reload: when a
 * retrain finishes elsewhere, the active version and F1 history advance
 * on the next tick.
 */

import type { ApiClient } from "./api.js";
import type { ModelsPayload, RetrainStatus } from "./types.js";

export const POLL_INTERVAL_MS = 5_000;

export interface RetrainViewModel {
  running: boolean;
  due: boolean;
  reason: string | null;
  activeVersion: string | null;
  history: { version: string; f1: number | null; active: boolean }[];
  reviewedSince: number;
  volume: number;
  periodDays: number;
  daysElapsed: number | null;
  lastOutcome: string | null;
}

export function buildViewModel(
  status: RetrainStatus,
  models: ModelsPayload,
  now: Date = new Date(),
): RetrainViewModel {
  const daysElapsed = status.last_retrain_at
    ? (now.getTime() - Date.parse(status.last_retrain_at)) / 86_400_000
    : null;
  let lastOutcome: string | null = null;
  if (status.last) {
    lastOutcome =
      status.last.status === "ok"
        ? `trained ${status.last.model_version}` +
          (status.last.activated ? " (now active)" : " (not promoted)")
        : `failed: ${status.last.code ?? status.last.status}`;
  }
  return {
    running: status.running,
    due: status.due,
    reason: status.reason,
    activeVersion: models.active_version,
    history: models.models.map((entry) => ({
      version: entry.version,
      f1: entry.metrics_at_train["weighted_f1"] ?? null,
      active: entry.version === models.active_version,
    })),
    reviewedSince: status.reviewed_since,
    volume: status.policy.volume,
    periodDays: status.policy.period_days,
    daysElapsed,
    lastOutcome,
  };
}

export interface RetrainHandlers {
  onRetrain(): void;
}

export function renderRetrainPanel(
  doc: Document,
  vm: RetrainViewModel,
  handlers: RetrainHandlers,
): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "retrain-panel";

  const heading = doc.createElement("h2");
  heading.textContent = "Model";
  panel.appendChild(heading);

  if (vm.activeVersion === null) {
    const notice = doc.createElement("p");
    notice.className = "bootstrap-notice";
    notice.textContent =
      "No model yet — bootstrap required: review some items, then retrain.";
    panel.appendChild(notice);
  } else {
    const active = doc.createElement("p");
    active.className = "active-version";
    active.textContent = `Active: ${vm.activeVersion}`;
    panel.appendChild(active);
  }

  if (vm.history.length > 0) {
    const list = doc.createElement("ul");
    list.className = "f1-history";
    for (const entry of vm.history) {
      const li = doc.createElement("li");
      li.textContent =
        `${entry.version}: weighted F1 ` +
        (entry.f1 === null ? "n/a" : entry.f1.toFixed(3)) +
        (entry.active ? " ← active" : "");
      list.appendChild(li);
    }
    panel.appendChild(list);
  }

  const progress = doc.createElement("p");
  progress.className = "trigger-progress";
  const period =
    vm.daysElapsed === null
      ? "never retrained"
      : `${vm.daysElapsed.toFixed(1)} / ${vm.periodDays} days`;
  progress.textContent =
    `Reviews since retrain: ${vm.reviewedSince} / ${vm.volume} — ${period}` +
    (vm.due ? ` — due (${vm.reason})` : "");
  panel.appendChild(progress);

  if (vm.lastOutcome) {
    const last = doc.createElement("p");
    last.className = "last-outcome";
    last.textContent = `Last run: ${vm.lastOutcome}`;
    panel.appendChild(last);
  }

  const button = doc.createElement("button");
  button.type = "button";
  button.className = "retrain-button";
  button.textContent = vm.running ? "retraining…" : "retrain now";
  button.disabled = vm.running;
  button.addEventListener("click", () => handlers.onRetrain());
  panel.appendChild(button);

  return panel;
}

/** Polls status+models on a fixed interval and pushes view models out. */
export class RetrainPoller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly client: ApiClient,
    private readonly onUpdate: (vm: RetrainViewModel) => void,
    private readonly onError: (error: unknown) => void,
    private readonly intervalMs: number = POLL_INTERVAL_MS,
  ) {}

  async tick(): Promise<void> {
    try {
      const [status, models] = await Promise.all([
        this.client.retrainStatus(),
        this.client.getModels(),
      ]);
      this.onUpdate(buildViewModel(status, models));
    } catch (error) {
      this.onError(error);
    }
  }

  start(): void {
    if (this.timer !== null) return;
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
