/**
 * Example integration: plugging the reward adapter into a group-sampling
 * RL loop. The sampler here is a stub — bring your own model; the adapter
 * only cares about (prompts, completions, ground truths).
 *
 * Run against a live service:
 *   vidspect reward-serve --port 8420          # in the Python package
 *   npx tsx examples/trainer-loop.ts
 */

import { RewardServiceClient, grpoRewardAdapter } from "../src/index.js";

const ENDPOINT = process.env.VIDSPECT_REWARD_URL ?? "http://127.0.0.1:8420";
const GROUP_SIZE = 4;

function sampleCompletions(prompt: string, n: number): string[] {
  // stand-in for model.generate(prompt, n)
  return Array.from({ length: n }, (_, i) =>
    i % 2 === 0
      ? "<thinking>suspect region <type>Shape Distortion</type> in <t>[1.00, 2.00]</t> at <bbox>[10, 20, 110, 220]</bbox></thinking><answer>Fake</answer>"
      : "<thinking>looks fine to me</thinking><answer>Real</answer>",
  );
}

async function main(): Promise<void> {
  const rewardFn = grpoRewardAdapter({ endpoint: ENDPOINT, batchSize: 64 });
  const batch = [
    { prompt: "frames of clip A", groundTruth: "Fake" },
    { prompt: "frames of clip B", groundTruth: "Real" },
  ];

  for (const { prompt, groundTruth } of batch) {
    const completions = sampleCompletions(prompt, GROUP_SIZE);
    const rewards = await rewardFn(
      Array(GROUP_SIZE).fill(prompt),
      completions,
      Array(GROUP_SIZE).fill(groundTruth),
    );
    console.log(`${prompt} (gt=${groundTruth}): rewards =`, rewards.map((r) => r.toFixed(4)));

    // trainers that want service-side advantages ask for them explicitly
    const client = new RewardServiceClient({ endpoint: ENDPOINT });
    const { advantages } = await client.batchRewards(
      Array(GROUP_SIZE).fill(groundTruth),
      completions,
      { computeAdvantages: true },
    );
    console.log("  advantages =", advantages?.map((a) => a.toFixed(4)));
    // policy update with (completions, rewards/advantages) happens here
  }
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
