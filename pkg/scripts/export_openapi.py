"""Dump the service's OpenAPI document to a JSON file.

The app is built against a throwaway data directory; route and schema
definitions do not depend on stored state.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from starcast.api import create_app
from starcast.config import ServiceConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "docs" / "openapi.json"),
        metavar="PATH",
    )
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as scratch:
        app = create_app(ServiceConfig(data_dir=Path(scratch)))
        document = app.openapi()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(
        json.dumps(document, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
