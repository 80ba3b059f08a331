"""Shared test fixtures and builders.

Conventions used across the suite:
  * FIXED_CLOCK is the constant timestamp injected wherever wall time would
    otherwise leak into outputs; make_clock() gives lexically increasing
    stamps when ordering matters.
  * Property-style tests draw from ``random.Random(seed)`` with the seed in
    the loop, so a failure prints as one reproducible seed.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import pytest

from starcast.model import CastGraph, Character

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
PROMPT_GOLDENS = FIXTURES / "prompts"
RESPONSES = FIXTURES / "responses"
SCENARIO = FIXTURES / "scenario"

FIXED_CLOCK = "2026-01-01T00:00:00.000000Z"


def constant_clock() -> str:
    return FIXED_CLOCK


def make_clock(start: int = 0) -> Callable[[], str]:
    """Monotonic fake clock; stamps sort lexically in call order."""
    counter = {"n": start}

    def clock() -> str:
        n = counter["n"]
        counter["n"] = n + 1
        return f"2026-01-01T00:00:00.{n:06d}Z"

    return clock


def add_character(
    graph: CastGraph,
    name: str,
    attributes: list[tuple[str, str]] | None = None,
    now: str = FIXED_CLOCK,
) -> Character:
    return graph.create_character(
        name, attributes or [("description", f"{name} the placeholder")], None, now
    )


def small_cast(now: str = FIXED_CLOCK) -> tuple[CastGraph, Character, Character, Character]:
    """Three characters, one knowledge-bearing edge: Ada follows Brin and is
    granted Brin's first attribute; Cole floats free."""
    graph = CastGraph()
    ada = add_character(graph, "Ada", [("description", "keeps bees on a rooftop")], now)
    brin = add_character(
        graph,
        "Brin",
        [("trait", "never finishes a sentence"), ("secret", "sleeps in the archive")],
        now,
    )
    cole = add_character(graph, "Cole", [("habit", "counts stairs twice")], now)
    rel = graph.follow(ada.id, brin.id, "Ada mistrusts Brin politely", now)
    graph.set_knowledge(rel.id, [brin.attributes[0].id])
    return graph, ada, brin, cole


def goldens_cast() -> CastGraph:
    """The exact cast scripts/pin_goldens.py renders from; rendered golden
    tests rebuild it here so drift between script and suite shows up as a
    byte diff against the pinned files."""
    graph = CastGraph()
    t = FIXED_CLOCK
    alice = graph.create_character(
        "Alice",
        [("description", "a cartographer of drowned cities"),
         ("temper", "patient until interrupted")],
        None,
        t,
    )
    bob = graph.create_character(
        "Bob",
        [("trait", "hums sea shanties while thinking"),
         ("secret", "afraid of shallow water")],
        None,
        t,
    )
    caro = graph.create_character("Caro", [("calling", "collects unsent letters")], None, t)
    graph.create_character("Dana", [("habit", "answers questions with questions")], None, t)
    rel_bob = graph.follow(alice.id, bob.id, "Alice trusts Bob with map secrets", t)
    graph.set_knowledge(rel_bob.id, [bob.attributes[0].id])
    graph.follow(alice.id, caro.id, "Alice finds Caro unsettling", t)
    return graph


@pytest.fixture
def graph() -> CastGraph:
    return CastGraph()


@pytest.fixture
def clock() -> Callable[[], str]:
    return make_clock()
