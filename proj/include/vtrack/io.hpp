#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

namespace vtrack::io {

/// Binary PGM (P5), 8 or 16 bit; intensities scaled to [0,1].
ImageFrame read_pgm(const std::string& path);
/// 8-bit binary PGM; values rounded to the nearest level.
void write_pgm(const std::string& path, const ImageFrame& frame);

using Rgb = std::array<std::uint8_t, 3>;

/// Colour canvas for overlays.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    RgbImage(const ImageFrame& gray);
    void set(int x, int y, Rgb c);
    void draw(const Polyline& p, Rgb c);
};
void write_ppm(const std::string& path, const RgbImage& image);

/// `{"frame_index": n, "branches": [[[x, y], ...], ...]}`
VesselAnnotation read_annotation(const std::string& path);
void write_annotation(const std::string& path, const VesselAnnotation& ann);
std::string annotation_json(const VesselAnnotation& ann);

/// Frame files of a sequence directory: the entries of `manifest.txt` when present
/// (one file name per line, `#` comments), otherwise every `*.pgm` in name order.
std::vector<std::string> list_frames(const std::string& dir);
/// Files with the given extension in name order.
std::vector<std::string> list_files(const std::string& dir, const std::string& extension);

}  // namespace vtrack::io
