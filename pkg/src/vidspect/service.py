"""Reward-serving HTTP endpoint for external RL trainers.

POST /v1/reward scores a batch of (ground_truth, completion) pairs and
optionally returns group-relative advantages; GET /v1/health reports the
build. The endpoint is stateless: responses are a pure function of the
request body and the server's default config. Malformed bodies get a
structured 400; per-item problems are error markers that never fail the
batch.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .grammar import Label
from .rewards import RewardConfig, RewardMode, group_advantages, total_reward


class RewardItem(BaseModel):
    ground_truth: str
    completion: str


class ConfigOverrides(BaseModel):
    w_acc: float | None = None
    w_chk: float | None = None
    fp_penalty: float | None = None
    check_cap_n: int | None = None
    mode: str | None = None
    advantage_epsilon: float | None = None


class RewardRequest(BaseModel):
    items: list[RewardItem] = Field(default_factory=list)
    config: ConfigOverrides | None = None
    compute_advantages: bool = False


def merge_config(base: RewardConfig, overrides: ConfigOverrides | None) -> RewardConfig:
    if overrides is None:
        return base
    values: dict[str, Any] = {}
    for name in ("w_acc", "w_chk", "fp_penalty", "check_cap_n", "advantage_epsilon"):
        v = getattr(overrides, name)
        if v is not None:
            values[name] = v
    if overrides.mode is not None:
        values["mode"] = RewardMode(overrides.mode)
    return RewardConfig(
        w_acc=values.get("w_acc", base.w_acc),
        w_chk=values.get("w_chk", base.w_chk),
        fp_penalty=values.get("fp_penalty", base.fp_penalty),
        check_cap_n=values.get("check_cap_n", base.check_cap_n),
        mode=values.get("mode", base.mode),
        advantage_epsilon=values.get("advantage_epsilon", base.advantage_epsilon),
    )


def score_batch(req: RewardRequest, default_config: RewardConfig) -> dict:
    try:
        cfg = merge_config(default_config, req.config)
    except ValueError as exc:
        return {"error": f"invalid config: {exc}"}

    items: list[dict] = []
    totals: list[float | None] = []
    for item in req.items:
        gt = Label.parse(item.ground_truth)
        if gt is None:
            items.append({"error": f"invalid ground_truth {item.ground_truth!r}"})
            totals.append(None)
            continue
        b = total_reward(gt, item.completion, cfg)
        items.append(
            {
                "r_acc": b.r_acc,
                "r_chk": b.r_chk,
                "total": b.total,
                "n_check": b.n_check,
                "format_ok": b.format_ok,
                "pred": b.pred.value if b.pred else None,
            }
        )
        totals.append(b.total)

    out: dict = {"items": items}
    if req.compute_advantages:
        valid = [t for t in totals if t is not None]
        advantages: list[float | None] = [None] * len(totals)
        if valid:
            adv = iter(group_advantages(valid, cfg).advantages)
            for i, t in enumerate(totals):
                if t is not None:
                    advantages[i] = next(adv)
        out["advantages"] = advantages
    return out


def create_app(default_config: RewardConfig = RewardConfig()) -> FastAPI:
    app = FastAPI(title="vidspect reward service", version=__version__)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request", "detail": exc.errors()})

    @app.get("/v1/health")
    async def health():
        return {"status": "ok", "service": "vidspect-reward", "version": __version__}

    @app.post("/v1/reward")
    async def reward(req: RewardRequest):
        result = score_batch(req, default_config)
        if "error" in result:
            return JSONResponse(status_code=400, content=result)
        return result

    return app


def serve_rewards(host: str = "127.0.0.1", port: int = 8420, config: RewardConfig = RewardConfig()) -> None:
    """Run the endpoint until interrupted; raises on an unavailable port."""
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
