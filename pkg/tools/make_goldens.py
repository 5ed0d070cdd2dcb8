#!/usr/bin/env python3
"""Regenerate the golden PNGs used by the figure byte-equality tests.

Run from the repository root after any intentional rendering change:

    python tools/make_goldens.py
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from golden_fixtures import golden_renders

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, image in golden_renders().items():
        path = OUT_DIR / f"{name}.png"
        path.write_bytes(image.to_png_bytes())
        print(f"wrote {path} ({path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
