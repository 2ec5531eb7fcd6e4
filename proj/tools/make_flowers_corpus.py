#!/usr/bin/env python3
# Copyright 2026 The wfcteach Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the flowers example corpus under data/flowers/ as RGBA PNGs.

One pixel per tile. The drawings are kept here as character art so the
corpus can be regenerated and reviewed as text.
"""

import argparse
import pathlib

from PIL import Image

COLORS = {
    ".": (0x9f, 0xd6, 0xf0, 0xff),  # sky
    "G": (0x3c, 0x9a, 0x2e, 0xff),  # grass
    "D": (0x7a, 0x4e, 0x2a, 0xff),  # dirt
    "S": (0x1f, 0x5e, 0x1a, 0xff),  # stem
    "L": (0x5c, 0xc2, 0x3c, 0xff),  # leaf
    "Y": (0xf4, 0xd0, 0x2c, 0xff),  # yellow flower
    "R": (0xd8, 0x2a, 0x2a, 0xff),  # red flower
    "P": (0x8e, 0x3c, 0xc8, 0xff),  # purple flower
    "W": (0xf4, 0xf4, 0xf4, 0xff),  # white flower
}

FLOWERS = """
................
................
..Y.............
..S.......Y.....
.LS.......S.....
..SL.....LS..Y..
..S.......S..S..
..S......LS.LS..
GGGGGGGGGGGGGGGG
DDDDDDDDDDDDDDDD
DDDDDDDDDDDDDDDD
"""

CORPUS = {
    # Iteration 1: one positive.
    "iter1_flowers": FLOWERS,
    # Iteration 2: the same drawing with red flowers.
    "iter2_flowers_red": FLOWERS.replace("Y", "R"),
    # Iteration 3: tiny flower studies without ground.
    "iter3_tiny_purple": """
...
.P.
.S.
LS.
.S.
""",
    "iter3_tiny_white": """
....
.W..
.SL.
.S..
""",
    "iter3_tiny_pair": """
.....
.Y.P.
.S.S.
.SLS.
""",
    # Iteration 5: a small slope.
    "iter5_hill": """
.........
.........
....GG...
...GDDG..
..GDDDDG.
GGDDDDDDG
DDDDDDDDD
""",
    # Iteration 6: stems on hills and isolated bumps.
    "iter6_hill_stems": """
...S....
...S....
..GSG...
.GDDDG..
GDDDDDGG
DDDDDDDD
""",
    "iter6_bump": """
.......
..R....
..S....
..S.G..
GGGGDGG
DDDDDDD
""",
    "iter6_bump_pair": """
..........
.P......W.
.S.......S
GSG....GGS
DDDG..GDDG
DDDDGGDDDD
""",
}


def Rows(art):
  rows = [r for r in art.strip("\n").split("\n")]
  if len({len(r) for r in rows}) != 1:
    raise ValueError("ragged drawing")
  return rows


def Write(path, art):
  rows = Rows(art)
  img = Image.new("RGBA", (len(rows[0]), len(rows)))
  img.putdata([COLORS[c] for row in rows for c in row])
  img.save(path, optimize=False)


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  default = pathlib.Path(__file__).resolve().parent.parent / "data" / "flowers"
  parser.add_argument("--out", type=pathlib.Path, default=default)
  args = parser.parse_args()
  args.out.mkdir(parents=True, exist_ok=True)
  for name, art in CORPUS.items():
    Write(args.out / f"{name}.png", art)
    print(args.out / f"{name}.png")


if __name__ == "__main__":
  main()
