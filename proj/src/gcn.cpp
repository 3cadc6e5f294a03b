#include "actsem/gcn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "actsem/error.hpp"

namespace actsem {

FeatureTensor to_features(const SkeletonSequence& seq) {
    if (seq.frames.empty()) throw Error(ErrorCode::EmptySequence, "no frames to convert");
    const std::size_t v = seq.joint_count();
    FeatureTensor x(seq.frames.size(), v, 3);
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        const auto& joints = seq.frames[t].joints;
        if (joints.size() != v) throw Error(ErrorCode::DimMismatch, "frame " + std::to_string(t) + " joint count differs");
        for (std::size_t j = 0; j < v; ++j) {
            x.at(t, j, 0) = joints[j].x;
            x.at(t, j, 1) = joints[j].y;
            x.at(t, j, 2) = joints[j].z;
        }
    }
    return x;
}

std::size_t ModelWeights::max_scales() const {
    std::size_t n = 0;
    for (const auto& layer : layers)
        std::visit([&](const auto& l) { n = std::max(n, l.conv.scale_weights.size()); }, layer);
    return n;
}

namespace {

void check_conv(const GraphConvWeights& conv, std::size_t index) {
    const std::string where = "layer " + std::to_string(index);
    if (conv.in_channels == 0 || conv.out_channels == 0)
        throw Error(ErrorCode::DimChainBroken, where + ": zero channel count");
    if (conv.scale_weights.empty()) throw Error(ErrorCode::DimChainBroken, where + ": no scales");
    for (const auto& w : conv.scale_weights)
        if (w.rows() != conv.in_channels || w.cols() != conv.out_channels)
            throw Error(ErrorCode::DimChainBroken, where + ": scale matrix is " + std::to_string(w.rows()) + "x" +
                                                       std::to_string(w.cols()) + ", expected " +
                                                       std::to_string(conv.in_channels) + "x" +
                                                       std::to_string(conv.out_channels));
    if (conv.bias.size() != conv.out_channels) throw Error(ErrorCode::DimChainBroken, where + ": bias length");
}

double activate(double v, Activation act) { return act == Activation::Relu ? std::max(0.0, v) : v; }

}  // namespace

void validate(const ModelWeights& model) {
    std::size_t channels = 3;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const GraphConvWeights& conv = std::visit([](const auto& l) -> const GraphConvWeights& { return l.conv; },
                                                  model.layers[i]);
        if (const auto* g3d = std::get_if<G3dLayer>(&model.layers[i]); g3d && g3d->tau % 2 == 0)
            throw Error(ErrorCode::EvenWindow, "layer " + std::to_string(i) + ": window " + std::to_string(g3d->tau));
        check_conv(conv, i);
        if (conv.in_channels != channels)
            throw Error(ErrorCode::DimChainBroken, "layer " + std::to_string(i) + " expects " +
                                                       std::to_string(conv.in_channels) + " channels, receives " +
                                                       std::to_string(channels));
        channels = conv.out_channels;
    }
    const auto& head = model.head;
    if (head.num_classes == 0) throw Error(ErrorCode::DimChainBroken, "head has no classes");
    if (head.in_channels != channels)
        throw Error(ErrorCode::DimChainBroken, "head expects " + std::to_string(head.in_channels) +
                                                   " channels, receives " + std::to_string(channels));
    if (head.weights.rows() != head.in_channels || head.weights.cols() != head.num_classes)
        throw Error(ErrorCode::DimChainBroken, "head matrix shape");
}

FeatureTensor ms_gcn_layer(const FeatureTensor& x, const MultiScaleAdjacency& adj, const MsGcnLayer& layer,
                           Activation act) {
    const auto& conv = layer.conv;
    const std::size_t T = x.frames(), V = x.joints();
    if (V != adj.num_joints())
        throw Error(ErrorCode::DimMismatch, "features have " + std::to_string(V) + " joints, adjacency " +
                                                std::to_string(adj.num_joints()));
    if (x.channels() != conv.in_channels)
        throw Error(ErrorCode::DimMismatch, "features have " + std::to_string(x.channels()) + " channels, layer expects " +
                                                std::to_string(conv.in_channels));
    if (conv.scale_weights.size() > adj.num_scales())
        throw Error(ErrorCode::DimMismatch, "layer has " + std::to_string(conv.scale_weights.size()) +
                                                " scales, adjacency " + std::to_string(adj.num_scales()));

    const std::size_t cin = conv.in_channels, cout = conv.out_channels;
    FeatureTensor out(T, V, cout);
    std::vector<double> agg(V * cin);
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> acc(V * cout, 0.0);
        for (std::size_t k = 0; k < conv.scale_weights.size(); ++k) {
            const Matrix& norm = adj.normalized[k];
            const Matrix& w = conv.scale_weights[k];
            // agg = norm * X_t
            std::fill(agg.begin(), agg.end(), 0.0);
            for (std::size_t v = 0; v < V; ++v)
                for (std::size_t u = 0; u < V; ++u) {
                    const double a = norm(v, u);
                    if (a == 0.0) continue;
                    for (std::size_t c = 0; c < cin; ++c) agg[v * cin + c] += a * x.at(t, u, c);
                }
            // acc += agg * W_k
            for (std::size_t v = 0; v < V; ++v)
                for (std::size_t c = 0; c < cin; ++c) {
                    const double a = agg[v * cin + c];
                    for (std::size_t o = 0; o < cout; ++o) acc[v * cout + o] += a * w(c, o);
                }
        }
        for (std::size_t v = 0; v < V; ++v)
            for (std::size_t o = 0; o < cout; ++o) out.at(t, v, o) = activate(acc[v * cout + o] + conv.bias[o], act);
    }
    return out;
}

FeatureTensor g3d_layer(const FeatureTensor& x, const WindowSet& windows, const G3dLayer& layer, Activation act) {
    const auto& conv = layer.conv;
    if (layer.tau % 2 == 0) throw Error(ErrorCode::EvenWindow, "window length " + std::to_string(layer.tau));
    if (windows.tau != layer.tau)
        throw Error(ErrorCode::DimMismatch, "window set built for tau=" + std::to_string(windows.tau) + ", layer has " +
                                                std::to_string(layer.tau));
    const std::size_t T = x.frames(), V = x.joints(), tau = layer.tau;
    if (V != windows.num_joints) throw Error(ErrorCode::DimMismatch, "joint count differs from window adjacency");
    if (x.channels() != conv.in_channels) throw Error(ErrorCode::DimMismatch, "channel count differs from layer");
    if (conv.scale_weights.size() > windows.normalized.size())
        throw Error(ErrorCode::DimMismatch, "layer has more scales than the window set");

    const std::size_t cin = conv.in_channels, cout = conv.out_channels;
    const std::size_t half = (tau - 1) / 2;
    const std::size_t center = half * V;

    // projected[k][(t*V + v)*cout + o] = (X_t * W_k)[v][o]
    std::vector<std::vector<double>> projected(conv.scale_weights.size(), std::vector<double>(T * V * cout, 0.0));
    for (std::size_t k = 0; k < conv.scale_weights.size(); ++k) {
        const Matrix& w = conv.scale_weights[k];
        auto& p = projected[k];
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t v = 0; v < V; ++v)
                for (std::size_t c = 0; c < cin; ++c) {
                    const double a = x.at(t, v, c);
                    for (std::size_t o = 0; o < cout; ++o) p[(t * V + v) * cout + o] += a * w(c, o);
                }
    }

    FeatureTensor out(T, V, cout);
    std::vector<double> acc(cout);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t v = 0; v < V; ++v) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t k = 0; k < conv.scale_weights.size(); ++k) {
                const Matrix& norm = windows.normalized[k];
                const auto& p = projected[k];
                for (std::size_t a = 0; a < tau; ++a) {
                    // window slot a holds frame t + a - half; out-of-range slots are zero padding
                    if (t + a < half || t + a - half >= T) continue;
                    const std::size_t src_t = t + a - half;
                    for (std::size_t u = 0; u < V; ++u) {
                        const double coeff = norm(center + v, a * V + u);
                        if (coeff == 0.0) continue;
                        const double* row = &p[(src_t * V + u) * cout];
                        for (std::size_t o = 0; o < cout; ++o) acc[o] += coeff * row[o];
                    }
                }
            }
            for (std::size_t o = 0; o < cout; ++o) out.at(t, v, o) = activate(acc[o] + conv.bias[o], act);
        }
    }
    return out;
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) return {};
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - peak);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

ScoreVector global_pool_and_classify(const FeatureTensor& x, const ClassifierHead& head) {
    if (x.channels() != head.in_channels)
        throw Error(ErrorCode::DimMismatch, "head expects " + std::to_string(head.in_channels) + " channels, got " +
                                                std::to_string(x.channels()));
    if (head.weights.rows() != head.in_channels || head.weights.cols() != head.num_classes)
        throw Error(ErrorCode::DimMismatch, "head matrix shape");
    const std::size_t C = x.channels();
    std::vector<double> pooled(C, 0.0);
    for (std::size_t t = 0; t < x.frames(); ++t)
        for (std::size_t v = 0; v < x.joints(); ++v)
            for (std::size_t c = 0; c < C; ++c) pooled[c] += x.at(t, v, c);
    const double count = static_cast<double>(x.frames() * x.joints());
    for (double& p : pooled) p /= count;

    std::vector<double> logits(head.num_classes, 0.0);
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t k = 0; k < head.num_classes; ++k) logits[k] += pooled[c] * head.weights(c, k);
    return ScoreVector{softmax(logits), {}};
}

ScoreVector infer_features(const FeatureTensor& x, const ModelWeights& model, const MultiScaleAdjacency& adj) {
    FeatureTensor h = x;
    for (const auto& layer : model.layers) {
        if (const auto* gcn = std::get_if<MsGcnLayer>(&layer)) {
            h = ms_gcn_layer(h, adj, *gcn);
        } else {
            const auto& g3d = std::get<G3dLayer>(layer);
            h = g3d_layer(h, build_window_set(adj, g3d.tau, g3d.conv.scale_weights.size()), g3d);
        }
    }
    return global_pool_and_classify(h, model.head);
}

ScoreVector infer(const SkeletonSequence& seq, const ModelWeights& model, const MultiScaleAdjacency& adj) {
    return infer_features(to_features(seq), model, adj);
}

// ---- MSW1 ----------------------------------------------------------------

namespace {

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void size(std::size_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
    void matrix(const Matrix& m) {
        for (double v : m.data()) f32(v);
    }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

    void need(std::size_t n) const {
        if (remaining() < n)
            throw Error(ErrorCode::TruncatedStream, "need " + std::to_string(n) + " bytes at offset " +
                                                        std::to_string(pos_) + ", " + std::to_string(remaining()) +
                                                        " left");
    }
    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
    Matrix matrix(std::size_t rows, std::size_t cols) {
        // checked before allocating: a corrupt dimension must not trigger a huge allocation
        if (cols != 0 && rows > remaining() / 4 / cols)
            throw Error(ErrorCode::TruncatedStream, std::to_string(rows) + "x" + std::to_string(cols) +
                                                        " matrix exceeds the remaining " +
                                                        std::to_string(remaining()) + " bytes");
        Matrix m(rows, cols);
        for (double& v : m.data()) v = f32();
        return m;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t byte_sum(std::span<const std::uint8_t> bytes) {
    std::uint32_t sum = 0;
    for (std::uint8_t b : bytes) sum += b;
    return sum;
}

void write_conv(ByteWriter& w, const GraphConvWeights& conv) {
    for (const auto& m : conv.scale_weights) w.matrix(m);
    for (double b : conv.bias) w.f32(b);
}

GraphConvWeights read_conv(ByteReader& r, std::size_t in, std::size_t out, std::size_t scales) {
    GraphConvWeights conv;
    conv.in_channels = in;
    conv.out_channels = out;
    for (std::size_t k = 0; k < scales; ++k) conv.scale_weights.push_back(r.matrix(in, out));
    for (std::size_t o = 0; o < out; ++o) conv.bias.push_back(r.f32());
    return conv;
}

constexpr std::size_t kHeaderSize = 5;

}  // namespace

std::vector<std::uint8_t> save_weights(const ModelWeights& model) {
    validate(model);
    ByteWriter w;
    for (auto b : kMswMagic) w.u8(b);
    w.u8(kMswVersion);
    w.size(model.layers.size());
    for (const auto& layer : model.layers) {
        if (const auto* gcn = std::get_if<MsGcnLayer>(&layer)) {
            w.u8(kLayerMsGcn);
            w.size(gcn->conv.in_channels);
            w.size(gcn->conv.out_channels);
            w.size(gcn->conv.scale_weights.size());
            write_conv(w, gcn->conv);
        } else {
            const auto& g3d = std::get<G3dLayer>(layer);
            w.u8(kLayerG3d);
            w.size(g3d.conv.in_channels);
            w.size(g3d.conv.out_channels);
            w.size(g3d.conv.scale_weights.size());
            w.size(g3d.tau);
            write_conv(w, g3d.conv);
        }
    }
    w.u8(kLayerHead);
    w.size(model.head.in_channels);
    w.size(model.head.num_classes);
    w.matrix(model.head.weights);

    auto& bytes = w.bytes();
    const std::uint32_t checksum = byte_sum(std::span(bytes).subspan(kHeaderSize));
    w.u32(checksum);
    return std::move(bytes);
}

ModelWeights load_weights(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.need(kMswMagic.size());
    for (auto expected : kMswMagic)
        if (r.u8() != expected) throw Error(ErrorCode::BadMagic, "not an MSW1 weights stream");
    if (const auto version = r.u8(); version != kMswVersion)
        throw Error(ErrorCode::VersionUnsupported, "MSW version " + std::to_string(version));

    ModelWeights model;
    const std::uint32_t layer_count = r.u32();
    // every layer record is at least 13 bytes
    if (layer_count > r.remaining() / 13)
        throw Error(ErrorCode::TruncatedStream, std::to_string(layer_count) + " layers declared in " +
                                                    std::to_string(r.remaining()) + " bytes");
    for (std::uint32_t i = 0; i < layer_count; ++i) {
        const std::uint8_t kind = r.u8();
        if (kind != kLayerMsGcn && kind != kLayerG3d)
            throw Error(ErrorCode::DimChainBroken, "record " + std::to_string(i) + ": unexpected layer kind " +
                                                       std::to_string(kind));
        const std::size_t in = r.u32(), out = r.u32(), scales = r.u32();
        if (kind == kLayerMsGcn) {
            model.layers.emplace_back(MsGcnLayer{read_conv(r, in, out, scales)});
        } else {
            const std::size_t tau = r.u32();
            model.layers.emplace_back(G3dLayer{tau, read_conv(r, in, out, scales)});
        }
    }
    if (const auto kind = r.u8(); kind != kLayerHead)
        throw Error(ErrorCode::DimChainBroken, "expected head record, found kind " + std::to_string(kind));
    model.head.in_channels = r.u32();
    model.head.num_classes = r.u32();
    model.head.weights = r.matrix(model.head.in_channels, model.head.num_classes);

    const std::size_t payload_end = r.position();
    const std::uint32_t stored = r.u32();
    if (r.remaining() != 0)
        throw Error(ErrorCode::DimChainBroken, std::to_string(r.remaining()) + " bytes after the checksum");
    const std::uint32_t actual = byte_sum(bytes.subspan(kHeaderSize, payload_end - kHeaderSize));
    if (stored != actual) throw Error(ErrorCode::BadChecksum, "MSW1 checksum mismatch");

    validate(model);
    return model;
}

ModelWeights load_weights_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open model " + path);
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return load_weights(bytes);
}

}  // namespace actsem
