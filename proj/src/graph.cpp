#include "actsem/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "actsem/error.hpp"

namespace actsem {

SkeletonGraph default_skeleton_graph() {
    SkeletonGraph g;
    g.num_joints = 25;
    for (const auto& [a, b] : kSkeletonBones)
        g.edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    return g;
}

Matrix base_adjacency(const SkeletonGraph& graph) {
    Matrix a(graph.num_joints, graph.num_joints);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [u, v] : graph.edges) {
        if (u >= graph.num_joints || v >= graph.num_joints)
            throw Error(ErrorCode::InvalidEdgeIndex, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                                         ") outside " + std::to_string(graph.num_joints) + " joints");
        if (u == v) throw Error(ErrorCode::InvalidEdgeIndex, "self-loop at " + std::to_string(u));
        if (!seen.insert(std::minmax(u, v)).second)
            throw Error(ErrorCode::InvalidEdgeIndex, "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        a(u, v) = 1.0;
        a(v, u) = 1.0;
    }
    return a;
}

std::vector<std::vector<std::size_t>> hop_distances(const Matrix& adjacency) {
    const std::size_t n = adjacency.rows();
    constexpr auto unreachable = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && adjacency(i, j) != 0.0) neighbors[i].push_back(j);

    std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, unreachable));
    for (std::size_t s = 0; s < n; ++s) {
        std::queue<std::size_t> q;
        dist[s][s] = 0;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : neighbors[u]) {
                if (dist[s][v] == unreachable) {
                    dist[s][v] = dist[s][u] + 1;
                    q.push(v);
                }
            }
        }
    }
    return dist;
}

Matrix k_hop_adjacency(const Matrix& adjacency, std::size_t k) {
    const auto dist = hop_distances(adjacency);
    const std::size_t n = adjacency.rows();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (dist[i][j] == k) out(i, j) = 1.0;
    return out;
}

Matrix normalize_adjacency(const Matrix& m, bool add_self_loops) {
    Matrix out = m;
    if (add_self_loops)
        for (std::size_t i = 0; i < std::min(out.rows(), out.cols()); ++i) out(i, i) += 1.0;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < out.cols(); ++j) degree += out(i, j);
        if (degree == 0.0) continue;
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) /= degree;
    }
    return out;
}

MultiScaleAdjacency build_multiscale(const Matrix& base, std::size_t max_hop) {
    MultiScaleAdjacency adj;
    adj.base = base;
    const auto dist = hop_distances(base);
    const std::size_t n = base.rows();
    for (std::size_t k = 0; k <= max_hop; ++k) {
        Matrix hop(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (dist[i][j] == k) hop(i, j) = 1.0;
        adj.normalized.push_back(normalize_adjacency(hop, false));
        adj.hops.push_back(std::move(hop));
    }
    return adj;
}

Matrix SparseGraph::to_dense() const {
    Matrix m(num_nodes, num_nodes);
    for (const auto& [i, j] : edges) {
        m(i, j) = 1.0;
        m(j, i) = 1.0;
    }
    return m;
}

SparseGraph st_graph(const Matrix& adjacency, std::size_t frames) {
    if (frames == 0) throw Error(ErrorCode::ZeroFrames, "st_graph needs at least one frame");
    const std::size_t v = adjacency.rows();
    SparseGraph g;
    g.num_nodes = frames * v;
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t off = t * v;
        for (std::size_t i = 0; i < v; ++i) {
            for (std::size_t j = i + 1; j < v; ++j)
                if (adjacency(i, j) != 0.0 || adjacency(j, i) != 0.0) g.edges.emplace_back(off + i, off + j);
            if (t + 1 < frames) g.edges.emplace_back(off + i, off + v + i);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

WindowAdjacency window_adjacency(const Matrix& hop, std::size_t tau) {
    if (tau == 0 || tau % 2 == 0) throw Error(ErrorCode::EvenWindow, "window length " + std::to_string(tau) + " must be odd");
    const std::size_t v = hop.rows();
    WindowAdjacency w;
    w.tau = tau;
    w.block = Matrix(tau * v, tau * v);
    for (std::size_t a = 0; a < tau; ++a)
        for (std::size_t b = 0; b < tau; ++b)
            for (std::size_t i = 0; i < v; ++i)
                for (std::size_t j = 0; j < v; ++j) w.block(a * v + i, b * v + j) = hop(i, j);
    return w;
}

WindowSet build_window_set(const MultiScaleAdjacency& adj, std::size_t tau, std::size_t num_scales) {
    if (num_scales > adj.num_scales())
        throw Error(ErrorCode::DimMismatch, "layer uses " + std::to_string(num_scales) + " scales, adjacency has " +
                                                std::to_string(adj.num_scales()));
    WindowSet set;
    set.tau = tau;
    set.num_joints = adj.num_joints();
    for (std::size_t k = 0; k < num_scales; ++k)
        set.normalized.push_back(normalize_adjacency(window_adjacency(adj.hops[k], tau).block, false));
    return set;
}

Matrix permute(const Matrix& m, const std::vector<std::size_t>& perm) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(perm[i], perm[j]) = m(i, j);
    return out;
}

}  // namespace actsem
