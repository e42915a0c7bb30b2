#!/usr/bin/env python3
"""Freeze the end-to-end mock-run fixture set.

Writes a 20-sample manifest, the scripted mock-backend responses, and the
expected metrics report. The expected report is derived by hand below —
independently of vidspect.metrics — and frozen byte-for-byte.

Derivation (pred=absent scores as Real):
  genA: f0->Fake(tp) f1->Fake(tp) f2->Real(fn) | r0->Real(tn) r1->abstain(tn)
        tp=2 fp=0 tn=2 fn=1  acc=4/5=80.00  R=2/3=66.67  P=100.0  F1=80.00
  genB: f0->Fake(tp) f1->abstain(fn) | r0->Fake(fp) r1->Real(tn) r2->Real(tn)
        tp=1 fp=1 tn=2 fn=1  acc=3/5=60.00  R=50.00  P=50.00  F1=50.00
  genC: f0..f2->Fake(tp x3) f3->Real(fn) | r0->Real(tn)
        tp=3 fp=0 tn=1 fn=1  acc=80.00  R=75.00  P=100.0  F1=6/7=85.71
  genD: f0->Fake(tp) | r0->Real(tn) r1->Fake(fp) r2->Real(tn) r3->Real(tn)
        tp=1 fp=1 tn=3 fn=0  acc=80.00  R=100.0  P=50.00  F1=2/3=66.67
  mean acc  = (80+60+80+80)/4                = 75.00
  mean R    = (200/3+50+75+100)/4            = 72.92
  mean F1   = (80+50+600/7+200/3)/4          = 70.60
  abstention = 2/20                          = 10.0

Run: python3 scripts/gen_e2e_fixture.py
"""

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

FAKE_WITH_BLOCK = (
    "<thinking>spotted it: <type>Shape Distortion</type> in <t>[1.00, 2.00]</t> "
    "at <bbox>[10, 20, 110, 220]</bbox></thinking><answer>Fake</answer>"
)
FAKE_PLAIN = "<thinking>artifacts everywhere</thinking><answer>Fake</answer>"
REAL_WITH_BLOCK = (
    "<thinking>checked <t>[0.50, 1.50]</t> at <bbox>[5, 5, 50, 50]</bbox> and it is clean"
    "</thinking><answer>Real</answer>"
)
REAL_PLAIN = "<thinking>nothing suspicious</thinking><answer>Real</answer>"
UNPARSEABLE = "I cannot tell whether this video is synthetic."


def sample(sid, label, generator, cond, duration, fps):
    return {
        "sample_id": sid,
        "label": label,
        "generator": generator,
        "cond_mode": cond,
        "duration": duration,
        "fps": fps,
        "width": 455,
        "height": 256,
        "uri": f"videos/{sid}.mp4",
        "source": "synthetic-e2e",
    }


def main() -> None:
    rows = [
        sample("a-f0", "Fake", "genA", "T2V", 5.0, 16.0),
        sample("a-f1", "Fake", "genA", "T2V", 4.0, 24.0),
        sample("a-f2", "Fake", "genA", "I2V", 5.0, 16.0),
        sample("a-r0", "Real", "genA", "None", 6.0, 30.0),
        sample("a-r1", "Real", "genA", "None", 5.0, 30.0),
        sample("b-f0", "Fake", "genB", "T2V", 5.0, 16.0),
        sample("b-f1", "Fake", "genB", "I2V", 3.0, 12.0),
        sample("b-r0", "Real", "genB", "None", 5.0, 30.0),
        sample("b-r1", "Real", "genB", "None", 7.0, 30.0),
        sample("b-r2", "Real", "genB", "None", 5.0, 25.0),
        sample("c-f0", "Fake", "genC", "T2V", 5.0, 16.0),
        sample("c-f1", "Fake", "genC", "T2V", 5.0, 16.0),
        sample("c-f2", "Fake", "genC", "I2V", 4.0, 16.0),
        sample("c-f3", "Fake", "genC", "T2V", 5.0, 16.0),
        sample("c-r0", "Real", "genC", "None", 5.0, 30.0),
        sample("d-f0", "Fake", "genD", "I2V", 5.0, 16.0),
        sample("d-r0", "Real", "genD", "None", 5.0, 30.0),
        sample("d-r1", "Real", "genD", "None", 5.0, 30.0),
        sample("d-r2", "Real", "genD", "None", 6.0, 30.0),
        sample("d-r3", "Real", "genD", "None", 5.0, 30.0),
    ]
    responses = {
        "a-f0": FAKE_WITH_BLOCK,
        "a-f1": FAKE_PLAIN,
        "a-f2": REAL_PLAIN,
        "a-r0": REAL_WITH_BLOCK,
        "a-r1": UNPARSEABLE,
        "b-f0": FAKE_WITH_BLOCK,
        "b-f1": UNPARSEABLE,
        "b-r0": FAKE_PLAIN,
        "b-r1": REAL_WITH_BLOCK,
        "b-r2": REAL_PLAIN,
        "c-f0": FAKE_WITH_BLOCK,
        "c-f1": FAKE_WITH_BLOCK,
        "c-f2": FAKE_PLAIN,
        "c-f3": REAL_PLAIN,
        "c-r0": REAL_WITH_BLOCK,
        "d-f0": FAKE_WITH_BLOCK,
        "d-r0": REAL_PLAIN,
        "d-r1": FAKE_PLAIN,
        "d-r2": REAL_WITH_BLOCK,
        "d-r3": REAL_PLAIN,
    }
    expected = {
        "groups": [
            {"key": "genA", "counts": {"tp": 2, "fp": 0, "tn": 2, "fn": 1},
             "acc": 80.0, "recall": 66.67, "precision": 100.0, "f1": 80.0, "abstained": 1},
            {"key": "genB", "counts": {"tp": 1, "fp": 1, "tn": 2, "fn": 1},
             "acc": 60.0, "recall": 50.0, "precision": 50.0, "f1": 50.0, "abstained": 1},
            {"key": "genC", "counts": {"tp": 3, "fp": 0, "tn": 1, "fn": 1},
             "acc": 80.0, "recall": 75.0, "precision": 100.0, "f1": 85.71, "abstained": 0},
            {"key": "genD", "counts": {"tp": 1, "fp": 1, "tn": 3, "fn": 0},
             "acc": 80.0, "recall": 100.0, "precision": 50.0, "f1": 66.67, "abstained": 0},
        ],
        "mean": {"acc": 75.0, "recall": 72.92, "f1": 70.6},
        "abstention_rate": 10.0,
    }

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "e2e_manifest.jsonl").write_text(
        "".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8"
    )
    (FIXTURES / "e2e_responses.json").write_text(json.dumps(responses, indent=1) + "\n", encoding="utf-8")
    (FIXTURES / "e2e_report.json").write_text(json.dumps(expected, indent=2), encoding="utf-8")
    print(f"wrote {len(rows)} samples, {len(responses)} responses, expected report")


if __name__ == "__main__":
    main()
