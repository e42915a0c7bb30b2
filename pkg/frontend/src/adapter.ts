import { RewardServiceClient } from "./client.js";
import { ClientConfig } from "./types.js";

/**
 * Sequence-level reward function for group-sampling RL trainers.
 *
 * The returned callable scores each completion against its ground truth
 * and yields one scalar total per completion, in order. It is agnostic to
 * group size and layout — pass whatever the trainer sampled. Advantage
 * normalization is the trainer's business (or request it explicitly via
 * RewardServiceClient.batchRewards).
 */
export type GrpoRewardFn = (
  prompts: string[],
  completions: string[],
  groundTruths: string[],
) => Promise<number[]>;

export function grpoRewardAdapter(config: Partial<ClientConfig> = {}): GrpoRewardFn {
  const client = new RewardServiceClient(config);
  return async (_prompts, completions, groundTruths) => {
    const { totals } = await client.batchRewards(groundTruths, completions);
    return totals;
  };
}
