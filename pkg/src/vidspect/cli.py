"""Command-line surface.

Exit codes: 0 success, 1 validation problems found, 2 fatal error.
"""

from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import click

from . import degrade as degrade_mod
from . import manifest as manifest_mod
from . import metrics as metrics_mod
from . import taxonomy as taxonomy_mod
from .backends import HttpChatBackend, MockBackend
from .evalrun import EvalConfig, load_prediction_log, run_eval
from .grammar import Label
from .rewards import RewardConfig, RewardMode


@click.group()
def main():
    """Toolkit for artifact-grounded AI-generated video detection."""


@main.group("taxonomy")
def taxonomy_group():
    """Canonical artifact taxonomy."""


@taxonomy_group.command("export")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write JSON here instead of stdout.")
def taxonomy_export(out):
    """Export the canonical taxonomy as a JSON document."""
    doc = taxonomy_mod.canonical_taxonomy().to_json()
    if out:
        Path(out).write_text(doc + "\n", encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(doc)


@main.group("manifest")
def manifest_group():
    """Dataset manifest operations."""


@manifest_group.command("validate")
@click.argument("samples", type=click.Path(exists=True, dir_okay=False))
@click.option("--annotations", type=click.Path(exists=True, dir_okay=False), default=None)
def manifest_validate(samples, annotations):
    """Validate samples.jsonl (and optionally annotations.jsonl)."""
    with open(samples, encoding="utf-8") as fh:
        records, violations = manifest_mod.load_manifest(fh)
    _, pair_violations = manifest_mod.pair_counterparts(records)
    violations.extend(pair_violations)
    if annotations:
        with open(annotations, encoding="utf-8") as fh:
            ann_records, ann_violations = manifest_mod.load_annotations(fh)
        violations.extend(ann_violations)
        sample_ids = {r.sample_id for r in records}
        for ann in ann_records:
            if ann.sample_id not in sample_ids:
                violations.append(
                    manifest_mod.ManifestViolation(0, "UnknownSampleId", f"annotation for unknown sample {ann.sample_id!r}", ann.sample_id)
                )
    click.echo(f"{len(records)} valid records, {len(violations)} violations")
    for v in violations:
        loc = f"line {v.line}" if v.line else "link"
        click.echo(f"  [{v.code}] {loc}: {v.message}")
    sys.exit(1 if violations else 0)


@manifest_group.command("stats")
@click.argument("samples", type=click.Path(exists=True, dir_okay=False))
@click.option("--annotations", type=click.Path(exists=True, dir_okay=False), default=None)
def manifest_stats(samples, annotations):
    """Print dataset distribution statistics."""
    with open(samples, encoding="utf-8") as fh:
        records, _ = manifest_mod.load_manifest(fh)
    anns = []
    if annotations:
        with open(annotations, encoding="utf-8") as fh:
            anns, _ = manifest_mod.load_annotations(fh)
    click.echo(json.dumps(manifest_mod.stats(records, anns), indent=2))


def _make_backend(spec: str):
    if spec.startswith("mock:"):
        path = spec[len("mock:"):]
        with open(path, encoding="utf-8") as fh:
            scripted = json.load(fh)
        default = scripted.pop("default", None)
        return MockBackend(responses=scripted, default=default)
    if spec.startswith("http:") or spec.startswith("https:"):
        return HttpChatBackend(base_url=spec)
    raise click.UsageError(f"backend must be mock:FILE or an http(s) URL, got {spec!r}")


@main.command("eval")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", "backend_spec", required=True, help="mock:FILE or a chat-completions base URL.")
@click.option("--frames", default=16, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False), help="Prediction log (JSONL).")
@click.option("--workers", default=8, show_default=True)
@click.option("--group-by", default="generator", show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None, help="Write the metrics report JSON here.")
@click.option("--resume/--no-resume", default=True, show_default=True)
def eval_cmd(manifest_path, backend_spec, frames, out_path, workers, group_by, report_path, resume):
    """Run a full evaluation against a model backend."""
    with open(manifest_path, encoding="utf-8") as fh:
        records, violations = manifest_mod.load_manifest(fh)
    if violations:
        click.echo(f"refusing to run: manifest has {len(violations)} violations", err=True)
        sys.exit(1)
    backend = _make_backend(backend_spec)
    config = EvalConfig(
        n_frames=frames,
        workers=workers,
        group_by=tuple(group_by.split(",")) if "," in group_by else group_by,
        log_path=out_path,
        resume=resume,
    )
    try:
        _, report = run_eval(records, backend, config)
    except Exception as exc:  # noqa: BLE001
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(2)
    click.echo(report.to_table())
    if report_path:
        Path(report_path).write_text(report.to_json() + "\n", encoding="utf-8")


@main.command("score")
@click.option("--predictions", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--group-by", default="generator", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report instead of the table.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def score_cmd(pred_path, manifest_path, group_by, as_json, out_path):
    """Score an existing prediction log against a manifest."""
    with open(manifest_path, encoding="utf-8") as fh:
        records, _ = manifest_mod.load_manifest(fh)
    with open(pred_path, encoding="utf-8") as fh:
        preds = load_prediction_log(fh)
    try:
        report = metrics_mod.grouped_report(
            ((p.sample_id, p.pred) for p in preds),
            records,
            tuple(group_by.split(",")) if "," in group_by else group_by,
        )
    except (metrics_mod.UnknownSampleId, metrics_mod.DuplicatePrediction, metrics_mod.EmptyCounts) as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(2)
    text = report.to_json() if as_json else report.to_table()
    click.echo(text)
    if out_path:
        Path(out_path).write_text(report.to_json() + "\n", encoding="utf-8")


@main.command("reward-serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8420, show_default=True)
@click.option("--w-acc", default=0.8, show_default=True)
@click.option("--w-chk", default=0.2, show_default=True)
@click.option("--fp-penalty", default=-0.2, show_default=True)
@click.option("--check-cap-n", default=3, show_default=True)
@click.option("--mode", type=click.Choice([m.value for m in RewardMode]), default="asymmetric", show_default=True)
def reward_serve(host, port, w_acc, w_chk, fp_penalty, check_cap_n, mode):
    """Serve rewards over HTTP (POST /v1/reward, GET /v1/health)."""
    from .service import serve_rewards

    cfg = RewardConfig(w_acc=w_acc, w_chk=w_chk, fp_penalty=fp_penalty, check_cap_n=check_cap_n, mode=RewardMode(mode))
    try:
        serve_rewards(host=host, port=port, config=cfg)
    except OSError as exc:
        click.echo(f"fatal: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(2)


@main.command("degrade")
@click.option("--frames", "frames_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--sample-id", required=True, help="Seeds the noise condition deterministically.")
@click.option("--conditions", default=",".join(degrade_mod.CONDITIONS), show_default=True)
def degrade_cmd(frames_dir, out_dir, sample_id, conditions):
    """Degrade a directory of frame images into condition-named subdirectories."""
    wanted = [c.strip() for c in conditions.split(",") if c.strip()]
    suite = degrade_mod.suite_by_condition(sample_id)
    unknown = [c for c in wanted if c not in suite]
    if unknown:
        click.echo(f"fatal: unknown conditions {unknown}; choose from {list(suite)}", err=True)
        sys.exit(2)
    frame_paths = sorted(
        p for p in Path(frames_dir).iterdir() if p.suffix.lower() in (".png", ".jpg", ".jpeg", ".bmp")
    )
    if not frame_paths:
        click.echo("fatal: no frame images found", err=True)
        sys.exit(2)
    from PIL import Image

    out_root = Path(out_dir)
    for cond in wanted:
        (out_root / cond).mkdir(parents=True, exist_ok=True)
    for idx, path in enumerate(frame_paths):
        frame = degrade_mod.Frame.from_image(Image.open(path))
        for cond in wanted:
            spec = degrade_mod.with_frame_seed(suite[cond], sample_id, idx)
            degraded = degrade_mod.apply(frame, spec)
            degraded.to_image().save(out_root / cond / f"{path.stem}.png")
    click.echo(f"degraded {len(frame_paths)} frames into {len(wanted)} conditions under {out_dir}")


@main.command("consistency-check")
@click.option("--reference", "reference_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Alternate reference-results JSON (defaults to the bundled table).")
def consistency_check(reference_path):
    """Verify a reference results table is self-consistent.

    Checks that each row's (Acc, R) and class sizes imply its printed F1,
    and that the mean row is the macro average of the group triples.
    """
    if reference_path:
        ref = json.loads(Path(reference_path).read_text(encoding="utf-8"))
    else:
        ref = json.loads(
            resources.files("vidspect.data").joinpath("reference_results.json").read_text(encoding="utf-8")
        )
    failures = 0

    for row in ref.get("consistency_rows", []):
        result = metrics_mod.table_consistency_check(row["acc"], row["recall"], row["n_fake"], row["n_real"])
        if not result.consistent:
            click.echo(f"FAIL {row['key']}: {result.reason}")
            failures += 1
        elif abs(result.f1 - row["f1"]) > 0.01:
            click.echo(f"FAIL {row['key']}: implied F1 {result.f1} != printed {row['f1']}")
            failures += 1
        else:
            click.echo(f"ok   {row['key']}: implied F1 {result.f1:.2f} matches printed {row['f1']:.2f}")

    det = ref.get("detection")
    if det:
        groups = det["groups"]
        n = len(groups)
        for name in ("acc", "recall", "f1"):
            macro = metrics_mod.round2(sum(g[name] for g in groups) / n)
            printed = det["mean"][name]
            if abs(macro - printed) > 0.01:
                click.echo(f"FAIL mean {name}: macro {macro} != printed {printed}")
                failures += 1
            else:
                click.echo(f"ok   mean {name}: macro {macro:.2f} matches printed {printed:.2f}")

    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
