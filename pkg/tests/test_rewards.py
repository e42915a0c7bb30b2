import json
import math
import random
from pathlib import Path

import pytest

from vidspect.grammar import Label, ParsedResponse, parse_response
from vidspect.rewards import (
    DEFAULT_CONFIG,
    EmptyGroup,
    RewardConfig,
    RewardMode,
    accuracy_reward,
    check_reward,
    group_advantages,
    score_parsed,
    total_reward,
)

from helpers import completion

FIXTURE = Path(__file__).parent / "fixtures" / "golden_rewards.json"
SYMMETRIC = RewardConfig(mode=RewardMode.SYMMETRIC)
FORMAT_ONLY = RewardConfig(mode=RewardMode.FORMAT_ONLY_CHECK)


def synthetic_parsed(pred: Label | None, n_check: int, format_ok: bool) -> ParsedResponse:
    return ParsedResponse("", pred, (), format_ok, n_check if pred is not None else 0)


class TestAccuracyReward:
    def test_correct_fake(self):
        assert accuracy_reward(Label.FAKE, synthetic_parsed(Label.FAKE, 0, True)) == 1.0

    def test_false_positive_penalty(self):
        assert accuracy_reward(Label.REAL, synthetic_parsed(Label.FAKE, 0, True)) == -0.2

    def test_missed_fake_zero(self):
        assert accuracy_reward(Label.FAKE, synthetic_parsed(Label.REAL, 0, True)) == 0.0

    def test_absent_pred_neutral(self):
        assert accuracy_reward(Label.REAL, synthetic_parsed(None, 0, False)) == 0.0
        assert accuracy_reward(Label.FAKE, synthetic_parsed(None, 0, False)) == 0.0

    def test_symmetric_mode(self):
        assert accuracy_reward(Label.REAL, synthetic_parsed(Label.FAKE, 0, True), SYMMETRIC) == 0.0
        assert accuracy_reward(Label.FAKE, synthetic_parsed(Label.REAL, 0, True), SYMMETRIC) == 0.0
        assert accuracy_reward(Label.FAKE, synthetic_parsed(Label.FAKE, 0, True), SYMMETRIC) == 1.0

    def test_custom_penalty(self):
        cfg = RewardConfig(fp_penalty=-0.5)
        assert accuracy_reward(Label.REAL, synthetic_parsed(Label.FAKE, 0, True), cfg) == -0.5


class TestCheckReward:
    def test_log_value(self):
        r = check_reward(synthetic_parsed(Label.FAKE, 3, True))
        assert r == pytest.approx(1.386294, abs=1e-6)
        assert r == min(math.log(4), math.log(4))

    def test_cap(self):
        assert check_reward(synthetic_parsed(Label.FAKE, 7, True)) == math.log(4)

    def test_gated_off_when_format_broken(self):
        assert check_reward(synthetic_parsed(Label.FAKE, 2, False)) == 0.0

    def test_gated_off_when_pred_absent(self):
        assert check_reward(synthetic_parsed(None, 0, False)) == 0.0

    def test_zero_blocks(self):
        assert check_reward(synthetic_parsed(Label.REAL, 0, True)) == 0.0

    def test_custom_cap(self):
        cfg = RewardConfig(check_cap_n=1)
        assert check_reward(synthetic_parsed(Label.FAKE, 5, True), cfg) == math.log(2)

    def test_format_only_mode(self):
        assert check_reward(synthetic_parsed(Label.FAKE, 0, True), FORMAT_ONLY) == 1.0
        assert check_reward(synthetic_parsed(Label.FAKE, 5, True), FORMAT_ONLY) == 1.0
        assert check_reward(synthetic_parsed(Label.FAKE, 5, False), FORMAT_ONLY) == 0.0


class TestTotalReward:
    def test_correct_fake_three_blocks(self):
        b = total_reward(Label.FAKE, completion("Fake", 3))
        assert b.total == pytest.approx(1.077259, abs=1e-6)
        assert b.total == pytest.approx(0.8 + 0.2 * math.log(4), abs=1e-12)
        assert b.n_check == 3 and b.format_ok and b.pred is Label.FAKE

    def test_correct_real_two_inspections(self):
        b = total_reward(Label.REAL, completion("Real", 2))
        assert b.total == pytest.approx(1.019722, abs=1e-6)
        assert b.total == pytest.approx(0.8 + 0.2 * math.log(3), abs=1e-12)

    def test_false_positive_with_block(self):
        b = total_reward(Label.REAL, completion("Fake", 1))
        assert b.total == pytest.approx(-0.021371, abs=1e-6)
        assert b.total == pytest.approx(0.8 * -0.2 + 0.2 * math.log(2), abs=1e-12)

    def test_check_contributes_even_when_wrong(self):
        b = total_reward(Label.FAKE, completion("Real", 2))
        assert b.r_acc == 0.0
        assert b.r_chk == pytest.approx(math.log(3), abs=1e-12)

    def test_breakdown_composition_invariant(self):
        for gt in (Label.FAKE, Label.REAL):
            for pred in ("Fake", "Real", None):
                for n in range(4):
                    for fmt in (True, False):
                        if pred is None and fmt:
                            continue
                        b = total_reward(gt, completion(pred, n, fmt))
                        assert b.total == pytest.approx(0.8 * b.r_acc + 0.2 * b.r_chk, abs=1e-15)
                        assert 0.0 <= b.r_chk <= math.log(4)

    def test_golden_fixture(self):
        rows = json.loads(FIXTURE.read_text())
        assert len(rows) == 60
        for row in rows:
            b = total_reward(Label.parse(row["gt"]), row["completion"])
            assert b.r_acc == pytest.approx(row["r_acc"], abs=1e-9)
            assert b.r_chk == pytest.approx(row["r_chk"], abs=1e-9)
            assert b.total == pytest.approx(row["total"], abs=1e-9)
            assert b.n_check == row["n_check"]
            assert b.format_ok == row["format_ok"]

    def test_deterministic(self):
        text = completion("Fake", 2)
        assert total_reward(Label.FAKE, text) == total_reward(Label.FAKE, text)


class TestProperties:
    def test_monotone_in_n_check(self):
        for gt in (Label.FAKE, Label.REAL):
            prev = None
            for n in range(11):
                t = score_parsed(gt, synthetic_parsed(Label.FAKE, n, True)).total
                if prev is not None:
                    assert t >= prev
                prev = t
        capped = {score_parsed(Label.FAKE, synthetic_parsed(Label.FAKE, n, True)).total for n in range(3, 12)}
        assert len(capped) == 1

    def test_asymmetry(self):
        for n in range(11):
            for fmt in (True, False):
                fp = score_parsed(Label.REAL, synthetic_parsed(Label.FAKE, n, fmt)).total
                fn = score_parsed(Label.FAKE, synthetic_parsed(Label.REAL, n, fmt)).total
                assert fp < fn

    def test_symmetric_mode_parity(self):
        for n in range(11):
            for fmt in (True, False):
                fp = score_parsed(Label.REAL, synthetic_parsed(Label.FAKE, n, fmt), SYMMETRIC).total
                fn = score_parsed(Label.FAKE, synthetic_parsed(Label.REAL, n, fmt), SYMMETRIC).total
                assert fp == fn

    def test_bounds_exhaustive(self):
        lo, hi = -0.16, 0.8 + 0.2 * math.log(4)
        totals = []
        for gt in (Label.FAKE, Label.REAL):
            for pred in (Label.FAKE, Label.REAL, None):
                for n in range(11):
                    for fmt in (True, False):
                        totals.append(score_parsed(gt, synthetic_parsed(pred, n, fmt)).total)
        assert min(totals) == pytest.approx(lo, abs=1e-12)
        assert max(totals) == pytest.approx(hi, abs=1e-12)


class TestGroupAdvantages:
    def test_hand_example(self):
        g = group_advantages([1.0, 0.0, 0.0, 1.0])
        assert list(g.advantages) == pytest.approx([1.0, -1.0, -1.0, 1.0], abs=1e-5)

    def test_constant_group(self):
        assert list(group_advantages([0.7, 0.7, 0.7]).advantages) == [0.0, 0.0, 0.0]

    def test_single_element(self):
        assert list(group_advantages([0.3]).advantages) == [0.0]

    def test_empty_raises(self):
        with pytest.raises(EmptyGroup):
            group_advantages([])

    def test_normalization_random_groups(self):
        rng = random.Random(11)
        for _ in range(200):
            size = rng.randrange(2, 65)
            rewards = [rng.uniform(-0.16, 1.08) for _ in range(size)]
            rewards[0] = rewards[1] + 0.5  # guarantee spread
            g = group_advantages(rewards)
            n = len(g.advantages)
            mean = sum(g.advantages) / n
            std = math.sqrt(sum((a - mean) ** 2 for a in g.advantages) / n)
            assert abs(mean) <= 1e-9
            assert abs(std - 1.0) <= 1e-4

    def test_epsilon_override(self):
        cfg = RewardConfig(advantage_epsilon=0.5)
        g = group_advantages([1.0, 0.0], cfg)
        assert g.advantages[0] == pytest.approx(0.5 / 1.0, abs=1e-12)


class TestConfigValidation:
    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            RewardConfig(w_acc=-0.1)

    def test_zero_cap_rejected(self):
        with pytest.raises(ValueError):
            RewardConfig(check_cap_n=0)

    def test_defaults(self):
        assert DEFAULT_CONFIG.w_acc == 0.8
        assert DEFAULT_CONFIG.w_chk == 0.2
        assert DEFAULT_CONFIG.fp_penalty == -0.2
        assert DEFAULT_CONFIG.check_cap_n == 3
        assert DEFAULT_CONFIG.mode is RewardMode.ASYMMETRIC
