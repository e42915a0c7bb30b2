"""Chat-style model backends for evaluation runs.

The contract is one call: complete(prompt) -> raw completion text. The
HTTP backend speaks the common chat-completions wire shape with
interleaved text/image parts; the mock backend replays scripted responses
for deterministic runs and tests.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import requests

from .evalprompt import InferencePrompt


class BackendError(RuntimeError):
    pass


class ChatBackend(Protocol):
    backend_id: str

    def complete(self, prompt: InferencePrompt, sample_id: str) -> str: ...


@dataclass
class MockBackend:
    """Scripted backend: per-sample responses, a default, or a callable.

    Latency is reported as 0.0 so runs are byte-stable across repeats and
    concurrency levels.
    """

    responses: dict[str, str] = field(default_factory=dict)
    default: str | Callable[[str], str] | None = None
    backend_id: str = "mock"
    deterministic_latency: bool = True
    calls: list[str] = field(default_factory=list)

    def complete(self, prompt: InferencePrompt, sample_id: str) -> str:
        self.calls.append(sample_id)
        if sample_id in self.responses:
            return self.responses[sample_id]
        if callable(self.default):
            return self.default(sample_id)
        if self.default is not None:
            return self.default
        raise BackendError(f"no scripted response for {sample_id!r}")


@dataclass
class HttpChatBackend:
    """Chat-completions endpoint adapter with bounded retries.

    Auth token comes from the environment (VIDSPECT_BACKEND_TOKEN, falling
    back to OPENAI_API_KEY); base URL may come from VIDSPECT_BACKEND_URL.
    """

    base_url: str = ""
    model: str = "default"
    temperature: float = 0.0
    max_tokens: int = 2048
    timeout_s: float = 120.0
    max_retries: int = 3
    backoff_s: float = 1.0
    backend_id: str = ""
    deterministic_latency: bool = False
    _sleep: Callable[[float], None] = field(default=time.sleep, repr=False)

    def __post_init__(self):
        if not self.base_url:
            self.base_url = os.environ.get("VIDSPECT_BACKEND_URL", "")
        if not self.base_url:
            raise BackendError("no backend base URL configured")
        if not self.backend_id:
            self.backend_id = f"{self.base_url}#{self.model}"

    def _token(self) -> str:
        return os.environ.get("VIDSPECT_BACKEND_TOKEN") or os.environ.get("OPENAI_API_KEY", "")

    def _messages(self, prompt: InferencePrompt) -> list[dict]:
        content = []
        for part in prompt.user_parts:
            if part.get("type") == "text":
                content.append({"type": "text", "text": part["text"]})
            else:
                content.append({"type": "image_url", "image_url": {"url": part["uri"]}})
        return [
            {"role": "system", "content": prompt.system_text},
            {"role": "user", "content": content},
        ]

    def complete(self, prompt: InferencePrompt, sample_id: str) -> str:
        body = {
            "model": self.model,
            "messages": self._messages(prompt),
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        token = self._token()
        if token:
            headers["Authorization"] = f"Bearer {token}"
        url = self.base_url.rstrip("/") + "/chat/completions"
        last: Exception | None = None
        for attempt in range(self.max_retries):
            try:
                resp = requests.post(url, json=body, headers=headers, timeout=self.timeout_s)
                resp.raise_for_status()
                payload = resp.json()
                return payload["choices"][0]["message"]["content"]
            except Exception as exc:  # noqa: BLE001 - every transport failure retries
                last = exc
                if attempt < self.max_retries - 1:
                    self._sleep(self.backoff_s * (2**attempt))
        raise BackendError(f"backend call for {sample_id!r} failed after {self.max_retries} attempts: {last}")
