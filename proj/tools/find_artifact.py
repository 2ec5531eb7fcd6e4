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
"""Locates a flowers-corpus artifact in work samples and prints a crop rect.

  floating     a stem with sky directly below it
  underground  a stem with grass or dirt directly above it

Samples are scanned in the order given, cells in row-major order. The crop
is the 3x4 block whose second row holds the stem. A block is accepted only if
it does not already occur (toroidally) in a positive example, since such a
block would teach nothing. Prints "<sample> x,y,w,h" or exits 1.

  find_artifact.py --kind floating --positive a.png b.png -- s1.png s2.png
  find_artifact.py --show s1.png
"""

import argparse
import pathlib
import sys

from PIL import Image

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))
from make_flowers_corpus import COLORS  # pylint: disable=g-import-not-at-top

CHARS = {rgba: c for c, rgba in COLORS.items()}
W, H = 3, 4


def Load(path):
  img = Image.open(path).convert("RGBA")
  w, h = img.size
  raw = img.tobytes()
  px = [tuple(raw[i:i + 4]) for i in range(0, len(raw), 4)]
  return [[CHARS.get(px[y * w + x], "?") for x in range(w)] for y in range(h)]


def Block(grid, x, y, wrap):
  h, w = len(grid), len(grid[0])
  rows = []
  for dy in range(H):
    row = []
    for dx in range(W):
      yy, xx = y + dy, x + dx
      if wrap:
        yy, xx = yy % h, xx % w
      row.append(grid[yy][xx])
    rows.append("".join(row))
  return tuple(rows)


def PositiveBlocks(grids):
  seen = set()
  for g in grids:
    for y in range(len(g)):
      for x in range(len(g[0])):
        seen.add(Block(g, x, y, wrap=True))
  return seen


def Matches(grid, x, y, kind):
  if grid[y][x] != "S":
    return False
  if kind == "floating":
    return y + 1 < len(grid) and grid[y + 1][x] == "."
  return y >= 1 and grid[y - 1][x] in "GD"


def Find(samples, positives, kind):
  seen = PositiveBlocks([Load(p) for p in positives])
  for path in samples:
    g = Load(path)
    for y in range(len(g)):
      for x in range(len(g[0])):
        if not Matches(g, x, y, kind):
          continue
        rx, ry = x - 1, y - 1
        if rx < 0 or ry < 0 or rx + W > len(g[0]) or ry + H > len(g):
          continue
        if Block(g, rx, ry, wrap=False) in seen:
          continue
        return path, (rx, ry, W, H)
  return None


def main():
  parser = argparse.ArgumentParser(description=__doc__,
                                   formatter_class=argparse.RawDescriptionHelpFormatter)
  parser.add_argument("--kind", choices=["floating", "underground"])
  parser.add_argument("--positive", nargs="*", default=[])
  parser.add_argument("--show", action="store_true", help="print samples as text")
  parser.add_argument("samples", nargs="+")
  args = parser.parse_args()
  if args.show:
    for s in args.samples:
      print(s)
      print("\n".join("".join(r) for r in Load(s)))
    return 0
  if not args.kind:
    parser.error("--kind is required")
  found = Find(args.samples, args.positive, args.kind)
  if found is None:
    return 1
  path, (x, y, w, h) = found
  print(f"{path} {x},{y},{w},{h}")
  return 0


if __name__ == "__main__":
  sys.exit(main())
