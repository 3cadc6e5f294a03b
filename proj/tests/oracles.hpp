#pragma once

// Reference computations for the tests. Each one is written from the
// definition, independent of the library's implementation path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "actsem/depth.hpp"
#include "actsem/gcn.hpp"
#include "actsem/graph.hpp"
#include "actsem/skeleton.hpp"
#include "actsem/tactile.hpp"

namespace oracle {

using actsem::Matrix;

// ---- skeleton ---------------------------------------------------------------

/// 25-joint frame from a 20-joint one via the explicit copy list (1-based).
inline actsem::SkeletonFrame remap_by_table(const actsem::SkeletonFrame& v1) {
    actsem::SkeletonFrame out;
    out.joints = v1.joints;
    out.valid = v1.valid;
    const int sources[5] = {3, 7, 7, 11, 11};  // for targets 21, 22, 23, 24, 25
    for (int s : sources) {
        out.joints.push_back(v1.joints[s - 1]);
        out.valid.push_back(false);
    }
    return out;
}

inline actsem::SkeletonFrame random_frame(std::mt19937& rng, std::size_t joints, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    actsem::SkeletonFrame f;
    for (std::size_t j = 0; j < joints; ++j) f.joints.push_back({u(rng), u(rng), u(rng)});
    f.valid.assign(joints, true);
    return f;
}

// ---- graph ------------------------------------------------------------------

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

/// Floyd-Warshall hop distances.
inline std::vector<std::vector<std::size_t>> all_pairs_distances(const Matrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && a(i, j) != 0.0) d[i][j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

inline Matrix exact_hop(const Matrix& a, std::size_t k) {
    const auto d = all_pairs_distances(a);
    Matrix m(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) m(i, j) = d[i][j] == k ? 1.0 : 0.0;
    return m;
}

inline Matrix row_normalize(const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = s == 0.0 ? 0.0 : m(i, j) / s;
    }
    return out;
}

/// Explicit tau x tau grid of copies of `hop`.
inline Matrix tile(const Matrix& hop, std::size_t tau) {
    const std::size_t v = hop.rows();
    Matrix out(tau * v, tau * v);
    for (std::size_t r = 0; r < tau * v; ++r)
        for (std::size_t c = 0; c < tau * v; ++c) out(r, c) = hop(r % v, c % v);
    return out;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline actsem::SkeletonGraph random_connected_graph(std::mt19937& rng, std::size_t n) {
    actsem::SkeletonGraph g;
    g.num_joints = n;
    std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
    for (std::size_t v = 1; v < n; ++v) {
        const std::size_t parent = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
        g.edges.emplace_back(parent, v);
        has[parent][v] = has[v][parent] = true;
    }
    const std::size_t extra = n > 2 ? std::uniform_int_distribution<std::size_t>(0, n)(rng) : 0;
    for (std::size_t e = 0; e < extra; ++e) {
        const std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        const std::size_t b = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        if (a == b || has[a][b]) continue;
        g.edges.emplace_back(a, b);
        has[a][b] = has[b][a] = true;
    }
    return g;
}

// ---- gcn --------------------------------------------------------------------

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

/// out[t][v][o] = relu(sum_k sum_u sum_c norm_k[v][u] * x[t][u][c] * W_k[c][o] + b[o])
inline actsem::FeatureTensor naive_ms_gcn(const actsem::FeatureTensor& x, const std::vector<Matrix>& norm,
                                          const actsem::GraphConvWeights& w, bool apply_relu = true) {
    actsem::FeatureTensor out(x.frames(), x.joints(), w.out_channels);
    for (std::size_t t = 0; t < x.frames(); ++t)
        for (std::size_t v = 0; v < x.joints(); ++v)
            for (std::size_t o = 0; o < w.out_channels; ++o) {
                double s = w.bias[o];
                for (std::size_t k = 0; k < w.scale_weights.size(); ++k)
                    for (std::size_t u = 0; u < x.joints(); ++u)
                        for (std::size_t c = 0; c < x.channels(); ++c)
                            s += norm[k](v, u) * x.at(t, u, c) * w.scale_weights[k](c, o);
                out.at(t, v, o) = apply_relu ? relu(s) : s;
            }
    return out;
}

/// Explicit window stacking with zero padding, dense product, centre rows.
inline actsem::FeatureTensor naive_g3d(const actsem::FeatureTensor& x, const std::vector<Matrix>& hops,
                                       std::size_t tau, const actsem::GraphConvWeights& w) {
    const std::size_t T = x.frames(), V = x.joints(), C = x.channels();
    const long half = static_cast<long>(tau - 1) / 2;
    actsem::FeatureTensor out(T, V, w.out_channels);
    for (std::size_t t = 0; t < T; ++t) {
        Matrix block(tau * V, C);
        for (std::size_t a = 0; a < tau; ++a) {
            const long src = static_cast<long>(t) + static_cast<long>(a) - half;
            if (src < 0 || src >= static_cast<long>(T)) continue;
            for (std::size_t u = 0; u < V; ++u)
                for (std::size_t c = 0; c < C; ++c) block(a * V + u, c) = x.at(static_cast<std::size_t>(src), u, c);
        }
        Matrix total(tau * V, w.out_channels);
        for (std::size_t k = 0; k < w.scale_weights.size(); ++k) {
            const Matrix n = row_normalize(tile(hops[k], tau));
            const Matrix part = actsem::multiply(actsem::multiply(n, block), w.scale_weights[k]);
            for (std::size_t i = 0; i < part.data().size(); ++i) total.data()[i] += part.data()[i];
        }
        const std::size_t centre = static_cast<std::size_t>(half) * V;
        for (std::size_t v = 0; v < V; ++v)
            for (std::size_t o = 0; o < w.out_channels; ++o) out.at(t, v, o) = relu(total(centre + v, o) + w.bias[o]);
    }
    return out;
}

inline std::vector<double> direct_softmax(const std::vector<double>& z) {
    std::vector<double> e;
    double s = 0.0;
    for (double v : z) {
        e.push_back(std::exp(v));
        s += e.back();
    }
    for (double& v : e) v /= s;
    return e;
}

inline actsem::ScoreVector naive_head(const actsem::FeatureTensor& x, const actsem::ClassifierHead& head) {
    std::vector<double> logits(head.num_classes, 0.0);
    for (std::size_t k = 0; k < head.num_classes; ++k)
        for (std::size_t c = 0; c < x.channels(); ++c) {
            double mean = 0.0;
            for (std::size_t t = 0; t < x.frames(); ++t)
                for (std::size_t v = 0; v < x.joints(); ++v) mean += x.at(t, v, c);
            logits[k] += mean / static_cast<double>(x.frames() * x.joints()) * head.weights(c, k);
        }
    return {direct_softmax(logits), {}};
}

/// Whole-model reference: chained per-layer oracles.
inline actsem::ScoreVector naive_infer(const actsem::FeatureTensor& x, const actsem::ModelWeights& m,
                                       const Matrix& base) {
    actsem::FeatureTensor h = x;
    for (const auto& layer : m.layers) {
        if (const auto* g = std::get_if<actsem::MsGcnLayer>(&layer)) {
            std::vector<Matrix> norm;
            for (std::size_t k = 0; k < g->conv.scale_weights.size(); ++k) norm.push_back(row_normalize(exact_hop(base, k)));
            h = naive_ms_gcn(h, norm, g->conv);
        } else {
            const auto& w = std::get<actsem::G3dLayer>(layer);
            std::vector<Matrix> hops;
            for (std::size_t k = 0; k < w.conv.scale_weights.size(); ++k) hops.push_back(exact_hop(base, k));
            h = naive_g3d(h, hops, w.tau, w.conv);
        }
    }
    return naive_head(h, m.head);
}

inline actsem::GraphConvWeights random_conv(std::mt19937& rng, std::size_t in, std::size_t out, std::size_t scales,
                                            bool float_exact = false) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] { return float_exact ? static_cast<double>(static_cast<float>(u(rng))) : u(rng); };
    actsem::GraphConvWeights w;
    w.in_channels = in;
    w.out_channels = out;
    for (std::size_t k = 0; k < scales; ++k) {
        Matrix m(in, out);
        for (double& v : m.data()) v = draw();
        w.scale_weights.push_back(m);
    }
    for (std::size_t o = 0; o < out; ++o) w.bias.push_back(draw());
    return w;
}

inline actsem::FeatureTensor random_tensor(std::mt19937& rng, std::size_t t, std::size_t v, std::size_t c) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    actsem::FeatureTensor x(t, v, c);
    for (double& val : x.values()) val = u(rng);
    return x;
}

/// Random valid model: one MS-GCN layer, optionally a G3D layer, then the head.
inline actsem::ModelWeights random_model(std::mt19937& rng, std::size_t hidden, std::size_t ms_scales,
                                         std::size_t g3d_scales, std::size_t tau, std::size_t classes,
                                         bool float_exact = false) {
    actsem::ModelWeights m;
    m.layers.push_back(actsem::MsGcnLayer{random_conv(rng, 3, hidden, ms_scales, float_exact)});
    if (g3d_scales > 0) m.layers.push_back(actsem::G3dLayer{tau, random_conv(rng, hidden, hidden, g3d_scales, float_exact)});
    m.head.in_channels = hidden;
    m.head.num_classes = classes;
    m.head.weights = Matrix(hidden, classes);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : m.head.weights.data()) v = float_exact ? static_cast<double>(static_cast<float>(u(rng))) : u(rng);
    return m;
}

// ---- depth ------------------------------------------------------------------

inline std::vector<double> dmi_by_pixel(const std::vector<actsem::DepthFrame>& frames) {
    std::vector<double> out(frames[0].pixels.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        int lowest = 256;
        for (const auto& f : frames) lowest = std::min<int>(lowest, f.pixels[i]);
        out[i] = 255.0 - lowest;
    }
    return out;
}

// ---- tactile ----------------------------------------------------------------

/// Well-formed glyph: no node carries FULL together with segments; exactly
/// one FULL node when `one_head` is set.
inline actsem::TactileGlyph random_glyph(std::mt19937& rng, bool one_head = true) {
    actsem::TactileGlyph g;
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& n : g.nodes) n.segments = static_cast<std::uint8_t>(byte(rng));
    if (one_head) {
        auto& head = g.nodes[std::uniform_int_distribution<std::size_t>(0, 8)(rng)];
        head = {0, true};
    } else {
        for (auto& n : g.nodes)
            if (byte(rng) < 40) n = {0, true};
    }
    return g;
}

}  // namespace oracle
