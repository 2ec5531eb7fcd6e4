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

#include "wfcteach/grid.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include "wfcteach/error.hpp"

namespace wfcteach {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kUnknownTile: return "unknown-tile";
    case ErrorCode::kRender: return "render";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kBounds: return "bounds";
    case ErrorCode::kCatalog: return "catalog";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kTraining: return "training";
    case ErrorCode::kStale: return "stale";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

std::string TileKey(const Tile& tile) {
  if (const auto* c = std::get_if<Rgba>(&tile)) {
    char buf[10];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x%02x", c->r, c->g, c->b, c->a);
    return buf;
  }
  return "'" + std::get<std::string>(tile) + "'";
}

std::optional<TileId> Palette::Find(const Tile& tile) const {
  auto it = index_.find(tile);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TileId Palette::FindOrAdd(const Tile& tile) {
  auto [it, inserted] = index_.try_emplace(tile, static_cast<TileId>(entries_.size()));
  if (inserted) entries_.push_back(tile);
  return it->second;
}

bool Palette::AllColors() const {
  for (const auto& t : entries_) {
    if (!std::holds_alternative<Rgba>(t)) return false;
  }
  return true;
}

void TileGrid::Validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kFormat, "grid dimensions must be at least 1x1");
  }
  if (cells.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kFormat, "grid cell count does not match dimensions");
  }
  for (TileId id : cells) {
    if (id >= palette.size()) {
      throw Error(ErrorCode::kUnknownTile, "grid cell references tile " +
                                               std::to_string(id) + " outside palette");
    }
  }
}

namespace {

TileId Resolve(Palette& palette, const Tile& tile, PaletteMode mode, int x, int y) {
  if (mode == PaletteMode::kSealed) {
    auto id = palette.Find(tile);
    if (!id) {
      throw Error(ErrorCode::kUnknownTile,
                  "tile " + TileKey(tile) + " at (" + std::to_string(x) + "," +
                      std::to_string(y) + ") is not in the shared palette");
    }
    return *id;
  }
  return palette.FindOrAdd(tile);
}

// Splits UTF-8 text into code point substrings. Invalid sequences are a
// format error.
std::vector<std::string> SplitCodePoints(std::string_view line, int line_no) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    auto lead = static_cast<unsigned char>(line[i]);
    std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3
                                                              : (lead >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > line.size()) {
      throw Error(ErrorCode::kFormat,
                  "invalid UTF-8 on line " + std::to_string(line_no));
    }
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(line[i + k]) & 0xC0) != 0x80) {
        throw Error(ErrorCode::kFormat,
                    "invalid UTF-8 on line " + std::to_string(line_no));
      }
    }
    out.emplace_back(line.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

RgbaImage DecodePng(std::span<const std::uint8_t> png) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (png.empty() ||
      !png_image_begin_read_from_memory(&image, png.data(), png.size())) {
    std::string why = image.message[0] ? image.message : "empty input";
    png_image_free(&image);
    throw Error(ErrorCode::kFormat, "malformed PNG: " + why);
  }
  image.format = PNG_FORMAT_RGBA;
  RgbaImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string why = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::kFormat, "malformed PNG: " + why);
  }
  if (out.width < 1 || out.height < 1) {
    throw Error(ErrorCode::kFormat, "PNG has zero area");
  }
  return out;
}

TileGrid IngestImage(std::span<const std::uint8_t> png, const Palette* shared,
                     PaletteMode mode) {
  RgbaImage raw = DecodePng(png);
  TileGrid grid;
  grid.width = raw.width;
  grid.height = raw.height;
  if (shared) grid.palette = *shared;
  grid.cells.resize(static_cast<std::size_t>(raw.width) * raw.height);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const std::uint8_t* p = &raw.pixels[(static_cast<std::size_t>(y) * raw.width + x) * 4];
      grid.at(x, y) = Resolve(grid.palette, Rgba{p[0], p[1], p[2], p[3]}, mode, x, y);
    }
  }
  return grid;
}

TileGrid IngestText(std::string_view text, const Palette* shared, PaletteMode mode) {
  if (text.empty()) throw Error(ErrorCode::kFormat, "empty text tilemap");
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  if (lines.size() > 1 && lines.back().empty()) lines.pop_back();

  TileGrid grid;
  if (shared) grid.palette = *shared;
  for (std::size_t row = 0; row < lines.size(); ++row) {
    int line_no = static_cast<int>(row) + 1;
    auto symbols = SplitCodePoints(lines[row], line_no);
    if (row == 0) {
      if (symbols.empty()) throw Error(ErrorCode::kFormat, "line 1 is empty");
      grid.width = static_cast<int>(symbols.size());
    } else if (static_cast<int>(symbols.size()) != grid.width) {
      throw Error(ErrorCode::kFormat,
                  "line " + std::to_string(line_no) + " has length " +
                      std::to_string(symbols.size()) + ", expected " +
                      std::to_string(grid.width));
    }
    for (int x = 0; x < grid.width; ++x) {
      grid.cells.push_back(Resolve(grid.palette, Tile{symbols[x]}, mode, x,
                                   static_cast<int>(row)));
    }
  }
  grid.height = static_cast<int>(lines.size());
  return grid;
}

std::vector<std::uint8_t> EmitImage(const TileGrid& grid) {
  grid.Validate();
  std::vector<Rgba> colors;
  colors.reserve(grid.palette.size());
  for (const auto& entry : grid.palette.entries()) {
    const auto* c = std::get_if<Rgba>(&entry);
    if (!c) {
      throw Error(ErrorCode::kRender,
                  "palette entry " + TileKey(entry) + " is not a color");
    }
    colors.push_back(*c);
  }
  std::vector<std::uint8_t> raster(grid.cells.size() * 4);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const Rgba& c = colors[grid.cells[i]];
    raster[i * 4 + 0] = c.r;
    raster[i * 4 + 1] = c.g;
    raster[i * 4 + 2] = c.b;
    raster[i * 4 + 3] = c.a;
  }

  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(grid.width);
  image.height = static_cast<png_uint_32>(grid.height);
  image.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster.data(), 0, nullptr)) {
    throw Error(ErrorCode::kRender, std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster.data(), 0, nullptr)) {
    throw Error(ErrorCode::kRender, std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::string EmitText(const TileGrid& grid) {
  grid.Validate();
  std::string out;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      const Tile& t = grid.palette[grid.at(x, y)];
      const auto* s = std::get_if<std::string>(&t);
      if (!s) throw Error(ErrorCode::kRender, "palette entry " + TileKey(t) + " is not a symbol");
      out += *s;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

TileGrid LoadGridFile(const std::string& path, const Palette* shared, PaletteMode mode) {
  auto bytes = ReadFileBytes(path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".txt") == 0) {
    return IngestText(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                      shared, mode);
  }
  return IngestImage(bytes, shared, mode);
}

}  // namespace wfcteach
