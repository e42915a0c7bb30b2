#!/usr/bin/env python3
"""Freeze the reward golden table.

Expected values are computed here from the reward formulas directly —
independently of vidspect.rewards — and written to
tests/fixtures/golden_rewards.json. The fixture doubles as the parity
table for the trainer client.

Run: python3 scripts/gen_golden_rewards.py
"""

import json
import math
from pathlib import Path

W_ACC = 0.8
W_CHK = 0.2
FP_PENALTY = -0.2
CAP = 3

FAKE_BLOCK = "<type>Shape Distortion</type> in <t>[1.00, 2.00]</t> at <bbox>[10, 20, 110, 220]</bbox>"
REAL_BLOCK = "<t>[1.00, 2.00]</t> at <bbox>[10, 20, 110, 220]</bbox>"


def build_completion(pred: str | None, n_blocks: int, format_ok: bool) -> str:
    if pred == "Fake":
        blocks = " ".join([FAKE_BLOCK] * n_blocks)
    elif pred == "Real":
        blocks = " ".join([REAL_BLOCK] * n_blocks)
    else:
        # no parseable answer; blocks of either kind never count
        blocks = " ".join([FAKE_BLOCK] * n_blocks)
    thinking = f"inspecting the clip {blocks}".strip()
    if pred is None:
        return f"<thinking>{thinking}</thinking> no verdict given"
    body = f"<thinking>{thinking}</thinking><answer>{pred}</answer>"
    if not format_ok:
        body += " trailing commentary breaks the envelope"
    return body


def expected(gt: str, pred: str | None, n_blocks: int, format_ok: bool) -> dict:
    if pred is None:
        r_acc = 0.0
    elif pred == gt:
        r_acc = 1.0
    elif gt == "Real" and pred == "Fake":
        r_acc = FP_PENALTY
    else:
        r_acc = 0.0
    n_check = n_blocks if pred is not None else 0
    if not format_ok or pred is None:
        r_chk = 0.0
    else:
        r_chk = min(math.log(1 + n_check), math.log(1 + CAP))
    return {
        "r_acc": r_acc,
        "r_chk": r_chk,
        "total": W_ACC * r_acc + W_CHK * r_chk,
        "n_check": n_check,
        "format_ok": format_ok and pred is not None,
    }


def main() -> None:
    rows = []
    for gt in ("Fake", "Real"):
        for pred in ("Fake", "Real", None):
            for n in range(6):
                for fmt in (True, False):
                    if pred is None and fmt:
                        continue  # no answer tag cannot be format-adherent
                    completion = build_completion(pred, n, fmt)
                    rows.append(
                        {
                            "gt": gt,
                            "pred": pred,
                            "n_blocks": n,
                            "completion": completion,
                            **expected(gt, pred, n, fmt),
                        }
                    )
    out = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "golden_rewards.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(rows)} golden rows to {out}")


if __name__ == "__main__":
    main()
