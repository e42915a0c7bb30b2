import { chunk, mapWithConcurrency } from "./chunk.js";
import {
  ClientConfig,
  RewardBreakdown,
  RewardItemRequest,
  RewardRequestBody,
  RewardResponseBody,
  isItemError,
} from "./types.js";

export class LengthMismatchError extends Error {
  constructor(gts: number, completions: number) {
    super(`ground_truths (${gts}) and completions (${completions}) must have equal length`);
    this.name = "LengthMismatchError";
  }
}

export class EndpointUnreachableError extends Error {
  constructor(endpoint: string, cause: unknown) {
    super(`reward endpoint ${endpoint} unreachable: ${String(cause)}`);
    this.name = "EndpointUnreachableError";
  }
}

/** A per-item failure reported by the service, addressed by global index. */
export class RewardItemFailure extends Error {
  readonly index: number;
  constructor(index: number, message: string) {
    super(`item ${index}: ${message}`);
    this.name = "RewardItemFailure";
    this.index = index;
  }
}

export interface BatchRewardsResult {
  /** Total reward per item, request order preserved. */
  totals: number[];
  /** Full server-side breakdowns, request order preserved. */
  breakdowns: RewardBreakdown[];
  /** Group-relative advantages when requested, else null. */
  advantages: number[] | null;
}

const DEFAULTS = { timeoutS: 30, batchSize: 64, concurrency: 1 };

export class RewardServiceClient {
  private readonly endpoint: string;
  private readonly timeoutS: number;
  private readonly batchSize: number;
  private readonly concurrency: number;
  private readonly config: ClientConfig["rewardConfig"];
  private readonly fetchFn: typeof fetch;

  /** Endpoint falls back to VIDSPECT_REWARD_URL when omitted. */
  constructor(config: Partial<ClientConfig> = {}) {
    const endpoint = config.endpoint ?? process.env.VIDSPECT_REWARD_URL;
    if (!endpoint) throw new Error("no reward endpoint configured (set endpoint or VIDSPECT_REWARD_URL)");
    this.endpoint = endpoint.replace(/\/+$/, "");
    this.timeoutS = config.timeoutS ?? DEFAULTS.timeoutS;
    this.batchSize = config.batchSize ?? DEFAULTS.batchSize;
    if (this.batchSize < 1) throw new Error(`batchSize must be >= 1, got ${this.batchSize}`);
    this.concurrency = config.concurrency ?? DEFAULTS.concurrency;
    this.config = config.rewardConfig;
    this.fetchFn = config.fetchFn ?? fetch;
  }

  async health(): Promise<{ status: string; version: string }> {
    const res = await this.request("GET", "/v1/health");
    return (await res.json()) as { status: string; version: string };
  }

  /**
   * Score (ground truth, completion) pairs in order-preserving chunks.
   *
   * Totals are the service's wire values verbatim — the client never
   * recomputes rewards. Per-item service errors surface as
   * RewardItemFailure carrying the global item index.
   */
  async batchRewards(
    groundTruths: string[],
    completions: string[],
    options: { computeAdvantages?: boolean } = {},
  ): Promise<BatchRewardsResult> {
    if (groundTruths.length !== completions.length) {
      throw new LengthMismatchError(groundTruths.length, completions.length);
    }
    if (groundTruths.length === 0) {
      return { totals: [], breakdowns: [], advantages: options.computeAdvantages ? [] : null };
    }
    const items: RewardItemRequest[] = groundTruths.map((gt, i) => ({
      ground_truth: gt,
      completion: completions[i],
    }));
    const chunks = chunk(items, this.batchSize);
    // Advantages are group-relative, so the whole call is one group: a
    // single chunk gets them inline, otherwise chunks are scored plain and
    // one whole-group request normalizes at the end.
    if (chunks.length === 1 && options.computeAdvantages) {
      const res = await this.postReward({ items, config: this.config, compute_advantages: true });
      const breakdowns = res.items.map((item, i) => {
        if (isItemError(item)) throw new RewardItemFailure(i, item.error);
        return item;
      });
      const advantages = (res.advantages ?? []).map((a, i) => {
        if (a === null) throw new RewardItemFailure(i, "no advantage returned");
        return a;
      });
      return { totals: breakdowns.map((b) => b.total), breakdowns, advantages };
    }
    const responses = await mapWithConcurrency(chunks, this.concurrency, (c) =>
      this.postReward({ items: c, config: this.config }),
    );

    const breakdowns: RewardBreakdown[] = [];
    let offset = 0;
    for (const [chunkIndex, res] of responses.entries()) {
      if (res.items.length !== chunks[chunkIndex].length) {
        throw new Error(
          `service returned ${res.items.length} items for a chunk of ${chunks[chunkIndex].length}`,
        );
      }
      for (const [i, item] of res.items.entries()) {
        if (isItemError(item)) throw new RewardItemFailure(offset + i, item.error);
        breakdowns.push(item);
      }
      offset += res.items.length;
    }
    const totals = breakdowns.map((b) => b.total);

    let advantages: number[] | null = null;
    if (options.computeAdvantages) {
      advantages = await this.advantagesFor(items);
    }
    return { totals, breakdowns, advantages };
  }

  /** One un-chunked advantages request over the full group. */
  private async advantagesFor(items: RewardItemRequest[]): Promise<number[]> {
    const res = await this.postReward({ items, config: this.config, compute_advantages: true });
    const advantages = res.advantages ?? [];
    return advantages.map((a, i) => {
      if (a === null) throw new RewardItemFailure(i, "no advantage returned");
      return a;
    });
  }

  private async postReward(body: RewardRequestBody): Promise<RewardResponseBody> {
    const res = await this.request("POST", "/v1/reward", body);
    return (await res.json()) as RewardResponseBody;
  }

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const controller = new AbortController();
    const timer = setTimeout(() => controller.abort(), this.timeoutS * 1000);
    try {
      let res: Response;
      try {
        res = await this.fetchFn(this.endpoint + path, {
          method,
          headers: body === undefined ? undefined : { "Content-Type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
          signal: controller.signal,
        });
      } catch (cause) {
        throw new EndpointUnreachableError(this.endpoint, cause);
      }
      if (!res.ok) {
        const detail = await res.text().catch(() => "");
        throw new Error(`reward service returned ${res.status}: ${detail}`);
      }
      return res;
    } finally {
      clearTimeout(timer);
    }
  }
}
