/** Composition root: token collection, queue + card + retrain panel,
 * optimistic review submission with rollback, and the connection banner.
 *
 * State lives in one plain object; every mutation funnels through
 * update() which re-renders the affected region from scratch. The
 * reviewed-set is the optimistic layer: an id enters it when a review is
 * submitted and leaves it again if the server rejects the submission.
 */

import {
  ApiClient,
  AuthRequiredError,
  ApiError,
  ConnectionFailed,
  createClient,
} from "./api.js";
import { FormState, emptyForm, reviewBody } from "./scheme.js";
import { renderQueue } from "./queue.js";
import { renderReviewCard } from "./reviewCard.js";
import { RetrainPoller, RetrainViewModel, renderRetrainPanel } from "./retrain.js";
import type { QueuePayload } from "./types.js";

const TOKEN_KEY = "loopsift_token";

interface AppState {
  payload: QueuePayload | null;
  reviewed: Set<string>;
  selectedId: string | null;
  form: FormState;
  submitting: boolean;
  formError: string | null;
  banner: string | null;
  needsToken: boolean;
  limit: number;
  minProb: number;
  retrain: RetrainViewModel | null;
}

export function mountApp(root: HTMLElement, baseUrl = ""): () => void {
  const doc = root.ownerDocument;
  const state: AppState = {
    payload: null,
    reviewed: new Set(),
    selectedId: null,
    form: emptyForm(),
    submitting: false,
    formError: null,
    banner: null,
    needsToken: !sessionStorage.getItem(TOKEN_KEY),
    limit: 50,
    minProb: 0.5,
    retrain: null,
  };

  const client: ApiClient = createClient({
    baseUrl,
    token: () => sessionStorage.getItem(TOKEN_KEY),
  });

  const poller = new RetrainPoller(
    client,
    (vm) => {
      state.retrain = vm;
      update();
    },
    (error) => handleError(error),
  );

  function handleError(error: unknown): void {
    if (error instanceof AuthRequiredError) {
      state.needsToken = true;
      poller.stop(); // every further poll would just fail the same way
    } else if (error instanceof ConnectionFailed) {
      state.banner = "Service unreachable.";
    } else if (error instanceof ApiError) {
      state.banner = `${error.code}: ${error.message}`;
    } else {
      state.banner = String(error);
    }
    update();
  }

  async function loadQueue(): Promise<void> {
    try {
      state.payload = await client.getQueue(state.limit, state.minProb);
      state.banner = null;
      state.needsToken = false;
      if (
        state.selectedId !== null &&
        !state.payload.items.some((item) => item.id === state.selectedId)
      ) {
        state.selectedId = null;
      }
      update();
    } catch (error) {
      handleError(error);
    }
  }

  function select(id: string): void {
    state.selectedId = id;
    state.form = emptyForm();
    state.formError = null;
    update();
  }

  async function submit(): Promise<void> {
    const id = state.selectedId;
    const payload = state.payload;
    if (id === null || payload === null) return;
    const body = reviewBody(state.form); // throws on scheme violations
    state.submitting = true;
    state.formError = null;
    state.reviewed.add(id); // optimistic: chip flips immediately
    update();
    try {
      await client.submitReview(id, body);
      state.submitting = false;
      const remaining = payload.items.find(
        (item) => item.id !== id && !state.reviewed.has(item.id),
      );
      state.selectedId = remaining ? remaining.id : null;
      state.form = emptyForm();
      update();
    } catch (error) {
      state.reviewed.delete(id); // rollback
      state.submitting = false;
      if (error instanceof AuthRequiredError) {
        state.needsToken = true;
        poller.stop();
      } else if (error instanceof ApiError) {
        state.formError = `${error.code}: ${error.message}`;
      } else if (error instanceof ConnectionFailed) {
        state.banner = "Service unreachable — review not saved.";
      } else {
        state.formError = String(error);
      }
      update();
    }
  }

  function tokenPanel(): HTMLElement {
    const panel = doc.createElement("form");
    panel.className = "token-panel";
    const label = doc.createElement("label");
    label.textContent = "API token ";
    const input = doc.createElement("input");
    input.type = "password";
    input.name = "token";
    label.appendChild(input);
    panel.appendChild(label);
    const button = doc.createElement("button");
    button.type = "submit";
    button.textContent = "connect";
    panel.appendChild(button);
    panel.addEventListener("submit", (event) => {
      event.preventDefault();
      sessionStorage.setItem(TOKEN_KEY, input.value);
      state.needsToken = false;
      void loadQueue();
      poller.start(); // idempotent; resumes polling after a stale token
    });
    return panel;
  }

  function filterBar(): HTMLElement {
    const bar = doc.createElement("form");
    bar.className = "filter-bar";
    const minLabel = doc.createElement("label");
    minLabel.textContent = "min probability ";
    const minInput = doc.createElement("input");
    minInput.type = "number";
    minInput.step = "0.05";
    minInput.min = "0";
    minInput.max = "1";
    minInput.name = "min_prob";
    minInput.value = String(state.minProb);
    minLabel.appendChild(minInput);
    bar.appendChild(minLabel);

    const limitLabel = doc.createElement("label");
    limitLabel.textContent = " page size ";
    const limitInput = doc.createElement("input");
    limitInput.type = "number";
    limitInput.min = "1";
    limitInput.max = "5000";
    limitInput.name = "limit";
    limitInput.value = String(state.limit);
    limitLabel.appendChild(limitInput);
    bar.appendChild(limitLabel);

    const apply = doc.createElement("button");
    apply.type = "submit";
    apply.textContent = "reload";
    bar.appendChild(apply);
    bar.addEventListener("submit", (event) => {
      event.preventDefault();
      state.minProb = Number(minInput.value);
      state.limit = Number(limitInput.value);
      void loadQueue();
    });
    return bar;
  }

  function update(): void {
    root.textContent = "";

    if (state.banner) {
      const banner = doc.createElement("div");
      banner.className = "connection-banner";
      banner.textContent = state.banner + " ";
      const retry = doc.createElement("button");
      retry.type = "button";
      retry.textContent = "retry";
      retry.addEventListener("click", () => {
        state.banner = null;
        void loadQueue();
        void poller.tick();
      });
      banner.appendChild(retry);
      root.appendChild(banner);
    }

    if (state.needsToken) {
      root.appendChild(tokenPanel());
      return;
    }

    if (state.retrain) {
      root.appendChild(
        renderRetrainPanel(doc, state.retrain, {
          onRetrain: () => {
            void client
              .startRetrain(false)
              .then(() => poller.tick())
              .catch((error) => handleError(error));
          },
        }),
      );
    }

    root.appendChild(filterBar());

    if (state.payload) {
      root.appendChild(
        renderQueue(doc, state.payload, state.reviewed, state.selectedId, {
          onSelect: select,
        }),
      );
      const selected = state.payload.items.find(
        (item) => item.id === state.selectedId,
      );
      if (selected && !state.reviewed.has(selected.id)) {
        root.appendChild(
          renderReviewCard(doc, {
            item: selected,
            form: state.form,
            submitting: state.submitting,
            error: state.formError,
            onForm: (next) => {
              state.form = next;
              update();
            },
            onSubmit: () => void submit(),
          }),
        );
      }
    }
  }

  update();
  if (!state.needsToken) {
    void loadQueue();
    poller.start();
  }
  return () => poller.stop();
}
