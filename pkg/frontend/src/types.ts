/** Wire types for the reward endpoint (field names are the contract). */

export type GroundTruth = "Fake" | "Real";

export interface RewardConfigOverrides {
  w_acc?: number;
  w_chk?: number;
  fp_penalty?: number;
  check_cap_n?: number;
  mode?: "asymmetric" | "symmetric" | "format_only_check";
  advantage_epsilon?: number;
}

export interface RewardItemRequest {
  ground_truth: string;
  completion: string;
}

export interface RewardBreakdown {
  r_acc: number;
  r_chk: number;
  total: number;
  n_check: number;
  format_ok: boolean;
  pred: string | null;
}

export interface RewardItemError {
  error: string;
}

export type RewardItemResponse = RewardBreakdown | RewardItemError;

export interface RewardRequestBody {
  items: RewardItemRequest[];
  config?: RewardConfigOverrides;
  compute_advantages?: boolean;
}

export interface RewardResponseBody {
  items: RewardItemResponse[];
  advantages?: (number | null)[];
}

export function isItemError(item: RewardItemResponse): item is RewardItemError {
  return "error" in item;
}

export interface ClientConfig {
  /** Base URL of the reward service, e.g. http://127.0.0.1:8420 */
  endpoint: string;
  /** Per-request timeout in seconds. */
  timeoutS?: number;
  /** Items per POST; must be >= 1. */
  batchSize?: number;
  /** Server-side reward-config overrides sent with every request. */
  rewardConfig?: RewardConfigOverrides;
  /** Concurrent in-flight chunk requests (1 = fully synchronous order). */
  concurrency?: number;
  /** Injection point for tests; defaults to global fetch. */
  fetchFn?: typeof fetch;
}
