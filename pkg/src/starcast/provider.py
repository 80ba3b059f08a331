"""Completion providers: the HTTP transport and the deterministic test doubles.

A provider turns one PromptBundle into raw text. The HTTP implementation
speaks the common chat-completions wire shape (system + optional user message,
model name, temperature, max tokens). The doubles are deterministic so the
whole pipeline can be replayed byte-for-byte in tests and offline runs.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol, Sequence

import httpx

from . import errors
from .prompts.render import PromptBundle

RETRYABLE_STATUSES = frozenset({429, 500, 502, 503, 504})
MAX_TRANSPORT_RETRIES = 2


@dataclass(frozen=True)
class ProviderConfig:
    """Connection settings for the HTTP provider plus the fan-out bound."""

    base_url: str
    model_name: str
    api_key: str
    temperature: float = 0.9
    max_output_tokens: int = 2048
    request_timeout: float = 60.0
    max_in_flight: int = 4

    def validate(self) -> "ProviderConfig":
        if not self.base_url.strip():
            raise ValueError("base_url must not be blank")
        if not self.model_name.strip():
            raise ValueError("model_name must not be blank")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be positive")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")
        return self


class Provider(Protocol):
    def complete(self, bundle: PromptBundle) -> str: ...


class HttpChatProvider:
    """POSTs to ``{base_url}/chat/completions``.

    Retries only transport-level 429/5xx, at most MAX_TRANSPORT_RETRIES times
    with exponential backoff; other 4xx fail immediately. ``sleeper`` is
    injectable so tests do not wait on real backoff.
    """

    def __init__(
        self,
        config: ProviderConfig,
        client: httpx.Client | None = None,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        self._config = config.validate()
        self._client = client or httpx.Client(timeout=config.request_timeout)
        self._sleeper = sleeper

    def complete(self, bundle: PromptBundle) -> str:
        messages = [{"role": "system", "content": bundle.system_text}]
        if bundle.user_text is not None:
            messages.append({"role": "user", "content": bundle.user_text})
        payload = {
            "model": self._config.model_name,
            "temperature": self._config.temperature,
            "max_tokens": self._config.max_output_tokens,
            "messages": messages,
        }
        url = self._config.base_url.rstrip("/") + "/chat/completions"
        headers = {}
        if self._config.api_key:
            headers["Authorization"] = f"Bearer {self._config.api_key}"

        last: errors.ProviderError | None = None
        for attempt in range(MAX_TRANSPORT_RETRIES + 1):
            if attempt:
                self._sleeper(0.5 * 2 ** (attempt - 1))
            try:
                response = self._client.post(url, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                raise errors.ProviderTimeout(f"provider timed out: {exc}") from exc
            except httpx.HTTPError as exc:
                raise errors.ProviderError(f"transport failure: {exc}") from exc
            if response.status_code in RETRYABLE_STATUSES:
                last = errors.ProviderError(
                    f"provider returned {response.status_code}",
                    status=response.status_code,
                    body=response.text,
                )
                continue
            if response.status_code >= 400:
                raise errors.ProviderError(
                    f"provider returned {response.status_code}",
                    status=response.status_code,
                    body=response.text,
                )
            return self._extract_text(response)
        assert last is not None
        raise last

    @staticmethod
    def _extract_text(response: httpx.Response) -> str:
        try:
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise errors.ProviderError(
                f"malformed provider response: {exc}", body=response.text
            ) from exc


class ScriptedProvider:
    """Replays canned items in call order; an Exception item raises, a
    callable item is invoked with the bundle. Thread-safe; records every
    bundle it saw in ``calls``."""

    def __init__(self, outputs: Sequence[str | Exception | Callable[[PromptBundle], str]]):
        self._outputs = list(outputs)
        self._lock = threading.Lock()
        self.calls: list[PromptBundle] = []

    def complete(self, bundle: PromptBundle) -> str:
        with self._lock:
            self.calls.append(bundle)
            if not self._outputs:
                raise errors.ProviderError("scripted provider exhausted")
            item = self._outputs.pop(0)
        if isinstance(item, Exception):
            raise item
        if callable(item):
            return item(bundle)
        return item


class CallbackProvider:
    """Delegates to a function; the hook for fault, delay, and concurrency
    instrumentation in tests."""

    def __init__(self, fn: Callable[[PromptBundle], str]):
        self._fn = fn

    def complete(self, bundle: PromptBundle) -> str:
        return self._fn(bundle)


class FixtureProvider:
    """Serves recorded responses keyed by prompt digest from a directory.

    Layout: ``manifest.json`` mapping digest to a relative file path; digests
    without a mapping fall back to ``<digest>.txt``. Unknown digests raise,
    listing what the directory holds, so a drifted prompt fails loudly
    instead of silently generating from the wrong fixture.
    """

    def __init__(self, root: str | Path):
        self._root = Path(root)
        self._mapping: dict[str, str] = {}
        manifest = self._root / "manifest.json"
        if manifest.is_file():
            self._mapping = json.loads(manifest.read_text(encoding="utf-8"))

    def complete(self, bundle: PromptBundle) -> str:
        digest = bundle.digest()
        rel = self._mapping.get(digest, f"{digest}.txt")
        path = self._root / rel
        if not path.is_file():
            known = sorted(self._mapping) or sorted(
                p.stem for p in self._root.glob("*.txt")
            )
            raise errors.ProviderError(
                f"no fixture for digest {digest} ({bundle.feature}); "
                f"known digests: {', '.join(known) or 'none'}"
            )
        return path.read_text(encoding="utf-8")


class UnconfiguredProvider:
    """Placeholder when no provider settings were supplied; generation
    endpoints surface this as a 503."""

    def complete(self, bundle: PromptBundle) -> str:
        raise errors.ProviderUnconfigured(
            "no completion provider configured; set the provider environment "
            "variables or pass a mock fixtures directory"
        )
