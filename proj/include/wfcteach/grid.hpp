// Copyright 2026 The wfcteach Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tile grids and their concrete encodings.
//
// Coordinates are (x right, y down) with the origin at the top-left cell and
// row-major storage; every other module inherits this convention.

#ifndef WFCTEACH_GRID_HPP_
#define WFCTEACH_GRID_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wfcteach {

using TileId = std::uint32_t;

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;

  auto operator<=>(const Rgba&) const = default;
};

// A renderable tile: a pixel color, or a one-character symbol for text maps.
using Tile = std::variant<Rgba, std::string>;

// Stable textual key: "#rrggbbaa" for colors, "'c'" for symbols. Keys of
// distinct tiles are distinct, and they are used wherever output must not
// depend on TileId numbering.
std::string TileKey(const Tile& tile);

class Palette {
 public:
  Palette() = default;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Tile& operator[](TileId id) const { return entries_[id]; }
  const std::vector<Tile>& entries() const { return entries_; }

  std::optional<TileId> Find(const Tile& tile) const;
  // Returns the existing id or appends the tile. Existing ids never move.
  TileId FindOrAdd(const Tile& tile);

  bool AllColors() const;

  bool operator==(const Palette& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Tile> entries_;
  std::map<Tile, TileId> index_;
};

struct TileGrid {
  int width = 0;
  int height = 0;
  std::vector<TileId> cells;
  Palette palette;

  TileId at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
  TileId& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }

  // Checks the structural invariants; throws Error otherwise.
  void Validate() const;

  bool operator==(const TileGrid& other) const = default;
};

// How a supplied palette may be used during ingestion.
enum class PaletteMode {
  kExtend,  // unseen tiles are appended
  kSealed,  // unseen tiles are an error naming the first offending cell
};

// Decodes a PNG byte stream (any bit depth / color type libpng can expand to
// RGBA8) into one tile per pixel.
TileGrid IngestImage(std::span<const std::uint8_t> png,
                     const Palette* shared = nullptr,
                     PaletteMode mode = PaletteMode::kExtend);

// Parses a UTF-8 character grid, one tile per code point. A single trailing
// newline is accepted; CRLF line endings are accepted.
TileGrid IngestText(std::string_view text, const Palette* shared = nullptr,
                    PaletteMode mode = PaletteMode::kExtend);

// Encodes as 8-bit RGBA PNG. Throws kRender when a palette entry is a symbol.
std::vector<std::uint8_t> EmitImage(const TileGrid& grid);

// Inverse of IngestText. Throws kRender when a palette entry is a color.
std::string EmitText(const TileGrid& grid);

// Raw decode, RGBA8 row-major. Used where pixel-exact comparison is needed
// without building a palette.
struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};
RgbaImage DecodePng(std::span<const std::uint8_t> png);

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes);

// Loads a grid by file extension: ".txt" as text, anything else as PNG.
TileGrid LoadGridFile(const std::string& path, const Palette* shared = nullptr,
                      PaletteMode mode = PaletteMode::kExtend);

}  // namespace wfcteach

#endif  // WFCTEACH_GRID_HPP_
