/** Typed client for the review service's /api/v1 endpoints.
 *
 * The bearer token is read per request from a provider, so the app can
 * collect it once and every subsequent call picks it up. Server errors
 * surface as ApiError carrying the service's stable error code; missing
 * or rejected credentials surface as AuthRequiredError; transport
 * failures as ConnectionFailed (the retry banner's trigger).
 */

import type {
  ModelsPayload,
  QueuePayload,
  RetrainStatus,
  ReviewBody,
  ReviewResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

export class AuthRequiredError extends ApiError {}

export class ConnectionFailed extends Error {
  constructor(cause: unknown) {
    super("service unreachable");
    this.cause = cause;
  }
}

export interface ClientOptions {
  baseUrl?: string;
  token: () => string | null;
  fetchFn?: typeof fetch;
}

export interface ApiClient {
  getQueue(limit: number, minProb: number): Promise<QueuePayload>;
  submitReview(exampleId: string, body: ReviewBody): Promise<ReviewResult>;
  retrainStatus(): Promise<RetrainStatus>;
  startRetrain(force: boolean): Promise<{ status: string; reason?: string }>;
  getModels(): Promise<ModelsPayload>;
}

export function createClient(options: ClientOptions): ApiClient {
  const base = (options.baseUrl ?? "").replace(/\/$/, "");
  const fetchFn = options.fetchFn ?? fetch;

  async function call<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    const token = options.token();
    if (token) headers["Authorization"] = `Bearer ${token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";

    let response: Response;
    try {
      response = await fetchFn(base + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ConnectionFailed(cause);
    }

    if (response.ok) return (await response.json()) as T;

    let code = "ERROR";
    let message = `request failed with status ${response.status}`;
    let details: Record<string, unknown> = {};
    try {
      const payload = (await response.json()) as Record<string, unknown>;
      if (typeof payload["code"] === "string") code = payload["code"];
      if (typeof payload["message"] === "string") message = payload["message"];
      if (payload["details"] && typeof payload["details"] === "object") {
        details = payload["details"] as Record<string, unknown>;
      }
    } catch {
      // non-JSON error body; keep the defaults
    }
    if (response.status === 401) {
      throw new AuthRequiredError(401, code, message, details);
    }
    throw new ApiError(response.status, code, message, details);
  }

  return {
    getQueue(limit, minProb) {
      const params = new URLSearchParams({
        limit: String(limit),
        min_prob: String(minProb),
      });
      return call("GET", `/api/v1/queue?${params}`);
    },
    submitReview(exampleId, body) {
      return call(
        "POST",
        `/api/v1/items/${encodeURIComponent(exampleId)}/review`,
        body,
      );
    },
    retrainStatus() {
      return call("GET", "/api/v1/retrain");
    },
    startRetrain(force) {
      return call("POST", "/api/v1/retrain", force ? { force: true } : {});
    },
    getModels() {
      return call("GET", "/api/v1/models");
    },
  };
}
