#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "actsem/gcn.hpp"

namespace actsem {

/// 8-bit quantized depth map, row-major.
struct DepthFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    friend bool operator==(const DepthFrame&, const DepthFrame&) = default;
};

/// Frames [start, start + count) of `frames` take part in the motion image.
struct DepthSequence {
    std::vector<DepthFrame> frames;
    std::size_t start = 0;
    std::size_t count = 0;

    static DepthSequence whole(std::vector<DepthFrame> frames);
};

/// Linear millimetre -> 0..255 mapping applied to 16-bit depth input.
/// A raw reading of 0 means "no measurement" and maps to 255 (far).
struct DepthRange {
    double near_mm = 500.0;
    double far_mm = 4500.0;
};

std::uint8_t quantize_depth(std::uint16_t raw_mm, const DepthRange& range);

/// Binary PGM (P5), 8- or 16-bit. 16-bit samples go through `range`.
DepthFrame read_pgm(std::istream& in, const DepthRange& range = {});
DepthFrame load_pgm_file(const std::string& path, const DepthRange& range = {});
void write_pgm(std::ostream& out, const DepthFrame& frame);
/// All *.pgm files of a directory in lexicographic order.
DepthSequence load_depth_directory(const std::string& dir, const DepthRange& range = {});

struct Roi {
    std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive
    friend bool operator==(const Roi&, const Roi&) = default;
};

struct DepthMotionImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;
    bool normalized = false;
    std::optional<Roi> roi;

    double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
    friend bool operator==(const DepthMotionImage&, const DepthMotionImage&) = default;
};

/// 255 minus the per-pixel minimum over the selected frames.
DepthMotionImage compute_dmi(const DepthSequence& seq);
/// Divides by the global maximum; an all-zero image stays zero.
DepthMotionImage normalize_dmi(const DepthMotionImage& img);
/// Tightest box around pixels strictly above `threshold`.
DepthMotionImage crop_roi(const DepthMotionImage& img, double threshold = 0.0);

/// Raw DMI as 8-bit PGM (values rounded).
void write_dmi_pgm(std::ostream& out, const DepthMotionImage& img);
DepthMotionImage dmi_from_pgm(const DepthFrame& frame);
/// Text form: `dmi <width> <height> <normalized 0|1> [x0 y0 x1 y1]`, then
/// one row per line.
void write_dmi_text(std::ostream& out, const DepthMotionImage& img);
DepthMotionImage read_dmi_text(std::istream& in);

/// Per-class mean images, all side x side.
struct CentroidSet {
    std::size_t side = 64;
    std::vector<std::string> class_names;
    std::vector<std::vector<double>> images;
};

/// Nearest-neighbour resample to side x side.
std::vector<double> resize_nearest(const DepthMotionImage& img, std::size_t side);

/// softmax(-squared_distance / temperature) over the centroids.
ScoreVector nearest_centroid_classify(const DepthMotionImage& img, const CentroidSet& centroids, double temperature);

/// Text form: `centroids <num_classes> <side>`, then per class a
/// `class <name>` line followed by `side` rows.
void write_centroids(std::ostream& out, const CentroidSet& set);
CentroidSet read_centroids(std::istream& in);
CentroidSet load_centroids_file(const std::string& path);

}  // namespace actsem
