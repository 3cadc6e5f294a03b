#include "actsem/depth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "actsem/error.hpp"
#include "actsem/matrix.hpp"

namespace actsem {

DepthSequence DepthSequence::whole(std::vector<DepthFrame> frames) {
    DepthSequence seq;
    seq.count = frames.size();
    seq.frames = std::move(frames);
    return seq;
}

std::uint8_t quantize_depth(std::uint16_t raw_mm, const DepthRange& range) {
    if (raw_mm == 0) return 255;
    const double scaled = (static_cast<double>(raw_mm) - range.near_mm) * 255.0 / (range.far_mm - range.near_mm);
    return static_cast<std::uint8_t>(std::clamp(std::round(scaled), 0.0, 255.0));
}

namespace {

// Reads one header token, skipping whitespace and '#' comments.
std::size_t pgm_header_value(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    std::size_t value = 0;
    if (!(in >> value)) throw Error(ErrorCode::MalformedImage, "PGM header");
    return value;
}

}  // namespace

DepthFrame read_pgm(std::istream& in, const DepthRange& range) {
    char magic[2] = {};
    if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5')
        throw Error(ErrorCode::MalformedImage, "expected binary PGM (P5)");
    DepthFrame frame;
    frame.width = pgm_header_value(in);
    frame.height = pgm_header_value(in);
    const std::size_t maxval = pgm_header_value(in);
    if (frame.width == 0 || frame.height == 0 || maxval == 0 || maxval > 65535)
        throw Error(ErrorCode::MalformedImage, "PGM dimensions or maxval out of range");
    if (!std::isspace(in.get())) throw Error(ErrorCode::MalformedImage, "PGM header terminator");

    const std::size_t n = frame.width * frame.height;
    frame.pixels.resize(n);
    if (maxval < 256) {
        if (!in.read(reinterpret_cast<char*>(frame.pixels.data()), static_cast<std::streamsize>(n)))
            throw Error(ErrorCode::MalformedImage, "PGM raster truncated");
    } else {
        std::vector<unsigned char> raw(2 * n);
        if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
            throw Error(ErrorCode::MalformedImage, "PGM raster truncated");
        for (std::size_t i = 0; i < n; ++i)
            frame.pixels[i] = quantize_depth(static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]), range);
    }
    return frame;
}

DepthFrame load_pgm_file(const std::string& path, const DepthRange& range) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    try {
        return read_pgm(in, range);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

void write_pgm(std::ostream& out, const DepthFrame& frame) {
    out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()), static_cast<std::streamsize>(frame.pixels.size()));
}

DepthSequence load_depth_directory(const std::string& dir, const DepthRange& range) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, "not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::vector<DepthFrame> frames;
    for (const auto& f : files) frames.push_back(load_pgm_file(f, range));
    return DepthSequence::whole(std::move(frames));
}

DepthMotionImage compute_dmi(const DepthSequence& seq) {
    if (seq.count == 0 || seq.frames.empty()) throw Error(ErrorCode::EmptySequence, "no depth frames");
    if (seq.start + seq.count > seq.frames.size())
        throw Error(ErrorCode::InvalidRange, "frames [" + std::to_string(seq.start) + ", " +
                                                 std::to_string(seq.start + seq.count) + ") of " +
                                                 std::to_string(seq.frames.size()));
    const DepthFrame& first = seq.frames[seq.start];
    std::vector<std::uint8_t> lowest = first.pixels;
    for (std::size_t t = seq.start + 1; t < seq.start + seq.count; ++t) {
        const DepthFrame& f = seq.frames[t];
        if (f.width != first.width || f.height != first.height || f.pixels.size() != lowest.size())
            throw Error(ErrorCode::DimMismatchAcrossFrames, "frame " + std::to_string(t) + " is " +
                                                                std::to_string(f.width) + "x" +
                                                                std::to_string(f.height) + ", expected " +
                                                                std::to_string(first.width) + "x" +
                                                                std::to_string(first.height));
        for (std::size_t i = 0; i < lowest.size(); ++i) lowest[i] = std::min(lowest[i], f.pixels[i]);
    }
    DepthMotionImage img;
    img.width = first.width;
    img.height = first.height;
    img.values.resize(lowest.size());
    for (std::size_t i = 0; i < lowest.size(); ++i) img.values[i] = 255.0 - lowest[i];
    return img;
}

DepthMotionImage normalize_dmi(const DepthMotionImage& img) {
    DepthMotionImage out = img;
    out.normalized = true;
    const double peak = img.values.empty() ? 0.0 : *std::max_element(img.values.begin(), img.values.end());
    if (peak <= 0.0) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    for (double& v : out.values) v /= peak;
    return out;
}

DepthMotionImage crop_roi(const DepthMotionImage& img, double threshold) {
    if (threshold < 0.0) throw Error(ErrorCode::InvalidArgument, "ROI threshold must be >= 0");
    std::size_t x0 = img.width, y0 = img.height, x1 = 0, y1 = 0;
    bool any = false;
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            if (img.at(x, y) > threshold) {
                any = true;
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    if (!any) throw Error(ErrorCode::AllBelowThreshold, "no pixel above " + format_9g(threshold));

    DepthMotionImage out;
    out.width = x1 - x0 + 1;
    out.height = y1 - y0 + 1;
    out.normalized = img.normalized;
    out.values.reserve(out.width * out.height);
    for (std::size_t y = y0; y <= y1; ++y)
        for (std::size_t x = x0; x <= x1; ++x) out.values.push_back(img.at(x, y));
    // compose with an earlier crop so the box stays in source coordinates
    const Roi parent = img.roi.value_or(Roi{});
    out.roi = Roi{parent.x0 + x0, parent.y0 + y0, parent.x0 + x1, parent.y0 + y1};
    return out;
}

void write_dmi_pgm(std::ostream& out, const DepthMotionImage& img) {
    DepthFrame frame;
    frame.width = img.width;
    frame.height = img.height;
    frame.pixels.reserve(img.values.size());
    const double scale = img.normalized ? 255.0 : 1.0;
    for (double v : img.values)
        frame.pixels.push_back(static_cast<std::uint8_t>(std::clamp(std::round(v * scale), 0.0, 255.0)));
    write_pgm(out, frame);
}

DepthMotionImage dmi_from_pgm(const DepthFrame& frame) {
    DepthMotionImage img;
    img.width = frame.width;
    img.height = frame.height;
    img.values.assign(frame.pixels.begin(), frame.pixels.end());
    return img;
}

void write_dmi_text(std::ostream& out, const DepthMotionImage& img) {
    out << "dmi " << img.width << ' ' << img.height << ' ' << (img.normalized ? 1 : 0);
    if (img.roi) out << ' ' << img.roi->x0 << ' ' << img.roi->y0 << ' ' << img.roi->x1 << ' ' << img.roi->y1;
    out << '\n';
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            if (x) out << ' ';
            out << format_exact(img.at(x, y));
        }
        out << '\n';
    }
}

DepthMotionImage read_dmi_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "empty DMI text");
    std::istringstream header(line);
    std::string magic;
    int normalized = 0;
    DepthMotionImage img;
    if (!(header >> magic >> img.width >> img.height >> normalized) || magic != "dmi" || img.width == 0 ||
        img.height == 0 || (normalized != 0 && normalized != 1))
        throw Error(ErrorCode::MalformedHeader, "expected 'dmi <width> <height> <0|1> [roi]'");
    img.normalized = normalized == 1;
    Roi roi;
    if (header >> roi.x0) {
        if (!(header >> roi.y0 >> roi.x1 >> roi.y1) || roi.x1 < roi.x0 || roi.y1 < roi.y0 ||
            roi.x1 - roi.x0 + 1 != img.width || roi.y1 - roi.y0 + 1 != img.height)
            throw Error(ErrorCode::MalformedHeader, "inconsistent ROI");
        img.roi = roi;
    }
    img.values.resize(img.width * img.height);
    for (double& v : img.values)
        if (!(in >> v)) throw Error(ErrorCode::TruncatedStream, "DMI text has fewer values than declared");
    return img;
}

std::vector<double> resize_nearest(const DepthMotionImage& img, std::size_t side) {
    std::vector<double> out(side * side);
    for (std::size_t y = 0; y < side; ++y) {
        const std::size_t sy = std::min(img.height - 1, (2 * y + 1) * img.height / (2 * side));
        for (std::size_t x = 0; x < side; ++x) {
            const std::size_t sx = std::min(img.width - 1, (2 * x + 1) * img.width / (2 * side));
            out[y * side + x] = img.at(sx, sy);
        }
    }
    return out;
}

ScoreVector nearest_centroid_classify(const DepthMotionImage& img, const CentroidSet& centroids, double temperature) {
    if (centroids.images.empty()) throw Error(ErrorCode::NoCentroids, "centroid set is empty");
    if (!(temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
    if (img.width == 0 || img.height == 0) throw Error(ErrorCode::DimMismatch, "empty image");
    const std::size_t n = centroids.side * centroids.side;
    const auto sample = resize_nearest(img, centroids.side);
    std::vector<double> logits;
    logits.reserve(centroids.images.size());
    for (std::size_t c = 0; c < centroids.images.size(); ++c) {
        const auto& centroid = centroids.images[c];
        if (centroid.size() != n)
            throw Error(ErrorCode::DimMismatch, "centroid " + std::to_string(c) + " has " +
                                                    std::to_string(centroid.size()) + " values, expected " +
                                                    std::to_string(n));
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) d2 += (sample[i] - centroid[i]) * (sample[i] - centroid[i]);
        logits.push_back(-d2 / temperature);
    }
    return ScoreVector{softmax(logits), centroids.class_names};
}

void write_centroids(std::ostream& out, const CentroidSet& set) {
    out << "centroids " << set.images.size() << ' ' << set.side << '\n';
    for (std::size_t c = 0; c < set.images.size(); ++c) {
        out << "class " << (c < set.class_names.size() ? set.class_names[c] : std::to_string(c)) << '\n';
        for (std::size_t y = 0; y < set.side; ++y) {
            for (std::size_t x = 0; x < set.side; ++x) {
                if (x) out << ' ';
                out << format_exact(set.images[c][y * set.side + x]);
            }
            out << '\n';
        }
    }
}

CentroidSet read_centroids(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "empty centroid file");
    std::istringstream header(line);
    std::string magic;
    std::size_t count = 0;
    CentroidSet set;
    if (!(header >> magic >> count >> set.side) || magic != "centroids" || set.side == 0)
        throw Error(ErrorCode::MalformedHeader, "expected 'centroids <count> <side>'");
    for (std::size_t c = 0; c < count; ++c) {
        do {
            if (!std::getline(in, line)) throw Error(ErrorCode::TruncatedStream, "missing centroid " + std::to_string(c));
        } while (line.find_first_not_of(" \t\r") == std::string::npos);
        if (line.rfind("class ", 0) != 0) throw Error(ErrorCode::MalformedLine, "expected 'class <name>'");
        set.class_names.push_back(line.substr(6));
        std::vector<double> image(set.side * set.side);
        for (double& v : image)
            if (!(in >> v)) throw Error(ErrorCode::TruncatedStream, "centroid " + std::to_string(c) + " values");
        std::getline(in, line);
        set.images.push_back(std::move(image));
    }
    return set;
}

CentroidSet load_centroids_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open centroids " + path);
    return read_centroids(in);
}

}  // namespace actsem
