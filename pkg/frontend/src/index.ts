export {
  RewardServiceClient,
  LengthMismatchError,
  EndpointUnreachableError,
  RewardItemFailure,
} from "./client.js";
export type { BatchRewardsResult } from "./client.js";
export { grpoRewardAdapter } from "./adapter.js";
export type { GrpoRewardFn } from "./adapter.js";
export { chunk, mapWithConcurrency } from "./chunk.js";
export * from "./types.js";
