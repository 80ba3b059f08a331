"""Rebuild fixtures/scenario/mock/manifest.json.

Replays the scenario manifest in embedded mode with a provider that serves
the recorded responses and notes which prompt digest asked for which file.
Run after changing prompt templates, the scenario manifest, or a response
fixture; commit the refreshed digest map together with that change.
"""

from __future__ import annotations

import json
import sys
import tempfile
import threading
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from starcast.cli import EmbeddedClient, run_manifest_jobs, seed_project
from starcast.manifest import load_manifest
from starcast.orchestrator import Orchestrator
from starcast.prompts import PromptBundle, output_language
from starcast.store import DataDir

RESPONSES = ROOT / "fixtures" / "responses"
SCENARIO = ROOT / "fixtures" / "scenario"


class RecordingProvider:
    """Chooses a response file by inspecting the prompt, records the digest."""

    def __init__(self):
        self.mapping: dict[str, str] = {}
        self._lock = threading.Lock()

    def _choose(self, bundle: PromptBundle) -> str:
        text = bundle.system_text
        if bundle.feature == "discovery":
            return "discovery_greatest_enemy.json"
        if bundle.feature == "journal":
            if "role of Chorong" in text:
                return "journal_chorong_candy.txt"
            if "role of Metal Monster" in text:
                return "journal_metal_monster_candy.txt"
            raise AssertionError("journal prompt for an unexpected author")
        if "<Past Comments History>" in text:
            return "comment_metal_monster_reply.txt"
        return "comment_chorong_first.txt"

    def complete(self, bundle: PromptBundle) -> str:
        name = self._choose(bundle)
        with self._lock:
            self.mapping[bundle.digest()] = name
        return (RESPONSES / name).read_text(encoding="utf-8")


def main() -> int:
    manifest = load_manifest(SCENARIO / "manifest.yaml")
    provider = RecordingProvider()
    clock = lambda: "2026-01-01T00:00:00.000000Z"
    timer = lambda: 0.0

    with tempfile.TemporaryDirectory() as tmp:
        data_dir = DataDir(Path(tmp), clock=clock)
        orchestrator = Orchestrator(
            provider, output_language(manifest.output_language), clock=clock, timer=timer
        )
        client = EmbeddedClient(data_dir, orchestrator)
        seed_project(client, manifest, SCENARIO)
        report = run_manifest_jobs(client, manifest, clock=clock, timer=timer)

    if not report["ok"]:
        print(json.dumps(report, indent=2, ensure_ascii=False))
        print("scenario replay failed; digest map not written", file=sys.stderr)
        return 1

    mapping = {
        digest: f"../../responses/{name}"
        for digest, name in sorted(provider.mapping.items())
    }
    out = SCENARIO / "mock" / "manifest.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(
        json.dumps(mapping, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {out} with {len(mapping)} digests")
    for digest, name in sorted(provider.mapping.items()):
        print(f"  {digest[:16]}  {name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
