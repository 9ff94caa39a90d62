/** Wire types for the /api/v1 review service. */

export interface QueueItem {
  id: string;
  probability: number;
  weak_label: 0 | 1 | null;
  text: string;
  source: string;
  language: string;
  created_at: string;
  metadata: Record<string, unknown>;
}

export interface QueuePayload {
  items: QueueItem[];
  total_unreviewed: number;
}

export interface ReviewBody {
  label: 0 | 1;
  toxic: boolean;
  targets: string[];
}

export interface ReviewResult {
  example_id: string;
  strong_label: 0 | 1;
  resolution: string;
}

export interface RetrainPolicyInfo {
  period_days: number;
  volume: number;
  mode: string;
}

export interface RetrainLast {
  status: string;
  reason?: string;
  model_version?: string;
  activated?: boolean;
  metrics?: Record<string, number>;
  finished_at?: string;
  code?: string;
  message?: string;
}

export interface RetrainStatus {
  running: boolean;
  last: RetrainLast | null;
  due: boolean;
  reason: string | null;
  reviewed_since: number;
  last_retrain_at: string | null;
  policy: RetrainPolicyInfo;
}

export interface ModelEntry {
  version: string;
  kind: string;
  path: string;
  trained_on_snapshot: number | null;
  metrics_at_train: Record<string, number>;
  registered_at: string;
  activated_at: string | null;
}

export interface ModelsPayload {
  models: ModelEntry[];
  active_version: string | null;
}
