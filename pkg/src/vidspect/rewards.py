"""Reward functions for group-relative RL on detection completions.

The total reward for a (ground truth, completion) pair is

    R = w_acc * r_acc + w_chk * r_chk        (w_acc=0.8, w_chk=0.2)

r_acc is asymmetric — a false alarm on a real video costs -0.2 while a
missed fake merely scores 0 — because confirming "Real" requires ruling
out every artifact whereas one artifact proves "Fake". r_chk rewards
well-formed check blocks with a log-saturated count,
min(ln(1+N), ln(1+3)), and is active only when the completion adheres to
the outer format. Two ablation modes are provided: a symmetric accuracy
reward and a format-only check reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .grammar import Label, ParsedResponse, parse_response


class RewardMode(str, Enum):
    ASYMMETRIC = "asymmetric"
    SYMMETRIC = "symmetric"
    FORMAT_ONLY_CHECK = "format_only_check"


@dataclass(frozen=True)
class RewardConfig:
    w_acc: float = 0.8
    w_chk: float = 0.2
    fp_penalty: float = -0.2
    check_cap_n: int = 3
    mode: RewardMode = RewardMode.ASYMMETRIC
    advantage_epsilon: float = 1e-6

    def __post_init__(self):
        if self.w_acc < 0 or self.w_chk < 0:
            raise ValueError("reward weights must be non-negative")
        if self.check_cap_n < 1:
            raise ValueError("check_cap_n must be >= 1")


DEFAULT_CONFIG = RewardConfig()


@dataclass(frozen=True)
class RewardBreakdown:
    r_acc: float
    r_chk: float
    total: float
    n_check: int
    format_ok: bool
    pred: Label | None


@dataclass(frozen=True)
class GroupRewards:
    rewards: tuple[float, ...]
    advantages: tuple[float, ...]


class EmptyGroup(ValueError):
    """Advantages are undefined for an empty reward group."""


def accuracy_reward(gt: Label, parsed: ParsedResponse, cfg: RewardConfig = DEFAULT_CONFIG) -> float:
    pred = parsed.answer
    if pred is None:
        # unparseable answer: neutral, not a false positive
        return 0.0
    if pred == gt:
        return 1.0
    if cfg.mode is RewardMode.SYMMETRIC:
        return 0.0
    if gt is Label.REAL and pred is Label.FAKE:
        return cfg.fp_penalty
    return 0.0


def check_reward(parsed: ParsedResponse, cfg: RewardConfig = DEFAULT_CONFIG) -> float:
    if cfg.mode is RewardMode.FORMAT_ONLY_CHECK:
        return 1.0 if parsed.outer_format_ok else 0.0
    if not parsed.outer_format_ok or parsed.answer is None:
        return 0.0
    return min(math.log(1 + parsed.n_check), math.log(1 + cfg.check_cap_n))


def score_parsed(gt: Label, parsed: ParsedResponse, cfg: RewardConfig = DEFAULT_CONFIG) -> RewardBreakdown:
    r_acc = accuracy_reward(gt, parsed, cfg)
    r_chk = check_reward(parsed, cfg)
    return RewardBreakdown(
        r_acc=r_acc,
        r_chk=r_chk,
        total=cfg.w_acc * r_acc + cfg.w_chk * r_chk,
        n_check=parsed.n_check,
        format_ok=parsed.outer_format_ok,
        pred=parsed.answer,
    )


def total_reward(gt: Label, completion: str, cfg: RewardConfig = DEFAULT_CONFIG) -> RewardBreakdown:
    """Parse a completion and compose the total reward; deterministic."""
    return score_parsed(gt, parse_response(completion), cfg)


def group_advantages(rewards: list[float], cfg: RewardConfig = DEFAULT_CONFIG) -> GroupRewards:
    """Group-relative advantages: a_i = (r_i - mean) / (pop_std + eps).

    Population std keeps size-1 groups well-defined; constant groups map
    to all-zero advantages through the epsilon'd denominator.
    """
    if len(rewards) == 0:
        raise EmptyGroup("cannot normalize an empty reward group")
    if max(rewards) == min(rewards):
        # exactly-zero advantages for constant groups, no float dust
        return GroupRewards(rewards=tuple(rewards), advantages=(0.0,) * len(rewards))
    n = len(rewards)
    mean = sum(rewards) / n
    var = sum((r - mean) ** 2 for r in rewards) / n
    std = math.sqrt(var)
    denom = std + cfg.advantage_epsilon
    return GroupRewards(
        rewards=tuple(rewards),
        advantages=tuple((r - mean) / denom for r in rewards),
    )
