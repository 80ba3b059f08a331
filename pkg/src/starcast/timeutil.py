"""Canonical UTC timestamp format used across stored entities and records."""

from datetime import datetime, timezone


def utcnow() -> str:
    return f"{datetime.now(timezone.utc):%Y-%m-%dT%H:%M:%S.%f}Z"
