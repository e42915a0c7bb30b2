"""vidspect: artifact-grounded AI-generated video detection toolkit.

Library surface:

- taxonomy: the canonical three-layer artifact taxonomy
- grammar: structured-response parsing and target serialization
- rewards: accuracy/check rewards and group-relative advantages
- metrics: confusion metrics, grouped reports, table consistency checks
- manifest: dataset manifests, counterpart pairing, frame sampling
- cot: dataset-construction requests against an external MLLM
- degrade: deterministic per-frame robustness degradations
- evalrun/service: evaluation orchestration and the reward endpoint
"""

__version__ = "0.1.0"
