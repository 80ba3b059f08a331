"""Service configuration from explicit values or environment variables.

All knobs live under the ``STARCAST_`` prefix:

    STARCAST_BIND                 host:port for the server (default 127.0.0.1:8722)
    STARCAST_DATA_DIR             data directory root (default ./data)
    STARCAST_PROVIDER_BASE_URL    completion endpoint base URL
    STARCAST_PROVIDER_MODEL       model name sent to the provider
    STARCAST_PROVIDER_API_KEY     bearer token for the provider
    STARCAST_PROVIDER_TIMEOUT     request timeout seconds (default 60)
    STARCAST_MAX_IN_FLIGHT        fan-out concurrency bound (default 4)
    STARCAST_OUTPUT_LANGUAGE      generation output language tag (default ko)
    STARCAST_CORS_ORIGINS         comma-separated allowed origins
    STARCAST_API_TOKEN            optional static bearer token for the API
    STARCAST_MOCK_FIXTURES        fixtures dir: use the deterministic mock provider
    STARCAST_DEBUG                1/true: expose interactive API docs at /docs
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .provider import (
    FixtureProvider,
    HttpChatProvider,
    Provider,
    ProviderConfig,
    UnconfiguredProvider,
)

DEFAULT_BIND = "127.0.0.1:8722"


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path
    bind: str = DEFAULT_BIND
    provider: ProviderConfig | None = None
    mock_fixtures: Path | None = None
    output_language: str = "ko"
    cors_origins: tuple[str, ...] = ()
    api_token: str | None = None
    debug: bool = False
    max_in_flight: int = 4

    def build_provider(self) -> Provider:
        """Mock fixtures win over HTTP settings; with neither, generation
        endpoints answer 503 until the service is configured."""
        if self.mock_fixtures is not None:
            return FixtureProvider(self.mock_fixtures)
        if self.provider is not None:
            return HttpChatProvider(self.provider)
        return UnconfiguredProvider()


def _flag(value: str | None) -> bool:
    return (value or "").strip().lower() in ("1", "true", "yes", "on")


def config_from_env(env: Mapping[str, str]) -> ServiceConfig:
    base_url = env.get("STARCAST_PROVIDER_BASE_URL", "").strip()
    model = env.get("STARCAST_PROVIDER_MODEL", "").strip()
    provider = None
    if base_url and model:
        provider = ProviderConfig(
            base_url=base_url,
            model_name=model,
            api_key=env.get("STARCAST_PROVIDER_API_KEY", ""),
            request_timeout=float(env.get("STARCAST_PROVIDER_TIMEOUT", "60")),
            max_in_flight=int(env.get("STARCAST_MAX_IN_FLIGHT", "4")),
        )
    origins = tuple(
        origin.strip()
        for origin in env.get("STARCAST_CORS_ORIGINS", "").split(",")
        if origin.strip()
    )
    mock = env.get("STARCAST_MOCK_FIXTURES", "").strip()
    return ServiceConfig(
        data_dir=Path(env.get("STARCAST_DATA_DIR", "data")),
        bind=env.get("STARCAST_BIND", DEFAULT_BIND),
        provider=provider,
        mock_fixtures=Path(mock) if mock else None,
        output_language=env.get("STARCAST_OUTPUT_LANGUAGE", "ko").strip() or "ko",
        cors_origins=origins,
        api_token=env.get("STARCAST_API_TOKEN") or None,
        debug=_flag(env.get("STARCAST_DEBUG")),
        max_in_flight=int(env.get("STARCAST_MAX_IN_FLIGHT", "4")),
    )
