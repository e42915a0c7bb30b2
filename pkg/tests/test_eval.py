import json
from pathlib import Path

import pytest

from vidspect.backends import BackendError, MockBackend
from vidspect.evalprompt import build_inference_prompt
from vidspect.evalrun import BackendUnreachable, EvalConfig, load_prediction_log, run_eval
from vidspect.grammar import Label
from vidspect.manifest import InvalidArgs, load_manifest

from helpers import completion, make_sample

FIXTURES = Path(__file__).parent / "fixtures"


class TestInferencePrompt:
    def test_sixteen_timestamped_parts(self):
        sample = make_sample("s", duration=5.0, fps=32.0)  # 160 frames
        prompt = build_inference_prompt(sample, 16)
        frames = [p for p in prompt.user_parts if p["type"] == "frame"]
        texts = [p for p in prompt.user_parts if p["type"] == "text"]
        assert len(frames) == 16
        assert texts[0]["text"] == "[T=0.00s]"
        assert prompt.frame_indices == tuple(range(0, 160, 10))

    def test_timestamps_non_decreasing(self):
        sample = make_sample("s", duration=1.0, fps=7.0)
        prompt = build_inference_prompt(sample, 16)
        stamps = [p["timestamp"] for p in prompt.user_parts if p["type"] == "frame"]
        assert stamps == sorted(stamps)

    def test_single_frame(self):
        prompt = build_inference_prompt(make_sample("s"), 1)
        frames = [p for p in prompt.user_parts if p["type"] == "frame"]
        assert len(frames) == 1
        assert frames[0]["timestamp"] == 0.0

    def test_invalid_duration(self):
        sample = make_sample("s")
        object.__setattr__(sample, "duration", 0.0)
        with pytest.raises(InvalidArgs):
            build_inference_prompt(sample, 16)

    def test_invalid_n_frames(self):
        with pytest.raises(InvalidArgs):
            build_inference_prompt(make_sample("s"), 0)

    def test_system_text_states_contract(self):
        prompt = build_inference_prompt(make_sample("s"), 2)
        assert "<thinking>" in prompt.system_text
        assert "<answer>" in prompt.system_text
        assert "Shape Distortion" in prompt.system_text  # taxonomy constraint

    def test_question_is_last_part(self):
        prompt = build_inference_prompt(make_sample("s"), 2)
        assert prompt.user_parts[-1]["type"] == "text"
        assert "Fake" in prompt.user_parts[-1]["text"]


def balanced_manifest():
    return [
        make_sample("m0", "Fake", generator="g"),
        make_sample("m1", "Fake", generator="g"),
        make_sample("m2", "Real", generator="g"),
        make_sample("m3", "Real", generator="g"),
    ]


class TestRunEval:
    def test_always_fake_backend(self):
        backend = MockBackend(default=completion("Fake", 1))
        records, report = run_eval(balanced_manifest(), backend, EvalConfig(workers=1))
        assert [r.pred for r in records] == [Label.FAKE] * 4
        g = report.groups[0]
        assert round(g.acc, 2) == 50.00
        assert round(g.recall, 2) == 100.00

    def test_unparseable_backend(self):
        backend = MockBackend(default="no tags at all")
        records, report = run_eval(balanced_manifest(), backend, EvalConfig(workers=1))
        assert all(r.pred is None for r in records)
        assert report.groups[0].recall == 0.0
        assert report.abstention_rate == 100.0

    def test_resume_skips_done_samples(self, tmp_path):
        log = tmp_path / "preds.jsonl"
        manifest = balanced_manifest()
        first = MockBackend(responses={
            "m0": completion("Fake", 1), "m1": completion("Fake", 1),
        })
        with pytest.raises(BackendError):
            first.complete(None, "m2")
        partial = [
            {"sample_id": "m0", "raw_response": completion("Fake", 1), "latency_ms": 0.0, "backend_id": "mock"},
            {"sample_id": "m1", "raw_response": completion("Real", 0), "latency_ms": 0.0, "backend_id": "mock"},
        ]
        log.write_text("".join(json.dumps(p) + "\n" for p in partial))
        backend = MockBackend(default=completion("Real", 0))
        records, _ = run_eval(manifest, backend, EvalConfig(workers=1, log_path=str(log)))
        assert sorted(backend.calls) == ["m2", "m3"]  # only the missing two
        assert len(records) == 4

    def test_no_resume_reissues_all(self, tmp_path):
        log = tmp_path / "preds.jsonl"
        log.write_text("")
        backend = MockBackend(default=completion("Real", 0))
        run_eval(balanced_manifest(), backend, EvalConfig(workers=1, log_path=str(log), resume=False))
        assert len(backend.calls) == 4

    def test_concurrency_levels_agree(self):
        responses = {s.sample_id: completion("Fake" if s.label is Label.FAKE else "Real", 1) for s in balanced_manifest()}
        rec1, rep1 = run_eval(balanced_manifest(), MockBackend(responses=responses), EvalConfig(workers=1))
        rec8, rep8 = run_eval(balanced_manifest(), MockBackend(responses=responses), EvalConfig(workers=8))
        assert [r.to_json_dict() for r in rec1] == [r.to_json_dict() for r in rec8]
        assert rep1.to_json() == rep8.to_json()

    def test_records_sorted_by_sample_id(self):
        manifest = list(reversed(balanced_manifest()))
        backend = MockBackend(default=completion("Real", 0))
        records, _ = run_eval(manifest, backend, EvalConfig(workers=4))
        ids = [r.sample_id for r in records]
        assert ids == sorted(ids)

    def test_partial_backend_failures_become_abstentions(self):
        backend = MockBackend(responses={"m0": completion("Fake", 1)})  # others raise
        records, _ = run_eval(balanced_manifest(), backend, EvalConfig(workers=2))
        by_id = {r.sample_id: r for r in records}
        assert by_id["m0"].pred is Label.FAKE
        assert by_id["m1"].pred is None

    def test_backend_unreachable_when_nothing_succeeds(self):
        class Exploding:
            backend_id = "broken"
            deterministic_latency = True

            def complete(self, prompt, sample_id):
                raise ConnectionError("down")

        # every completion empty -> unreachable
        with pytest.raises(BackendUnreachable):
            run_eval(balanced_manifest(), Exploding(), EvalConfig(workers=2))

    def test_log_appended_sorted(self, tmp_path):
        log = tmp_path / "preds.jsonl"
        backend = MockBackend(default=completion("Real", 0))
        run_eval(list(reversed(balanced_manifest())), backend, EvalConfig(workers=4, log_path=str(log)))
        with log.open() as fh:
            loaded = load_prediction_log(fh)
        assert [r.sample_id for r in loaded] == sorted(r.sample_id for r in loaded)
        assert all(r.latency_ms == 0.0 for r in loaded)  # deterministic mock latency


class TestE2EFixture:
    def test_mock_run_matches_frozen_report(self):
        with open(FIXTURES / "e2e_manifest.jsonl", encoding="utf-8") as fh:
            records, violations = load_manifest(fh)
        assert not violations
        responses = json.loads((FIXTURES / "e2e_responses.json").read_text())
        expected = (FIXTURES / "e2e_report.json").read_text()
        for workers in (1, 8):
            _, report = run_eval(records, MockBackend(responses=responses), EvalConfig(workers=workers))
            assert report.to_json() == expected
