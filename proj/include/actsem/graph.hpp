#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "actsem/matrix.hpp"

namespace actsem {

/// Bones of the 25-joint skeleton, 1-based joint numbers. 24 edges forming a
/// tree rooted at the spine base (joint 1); the head (joint 4) is a leaf.
inline constexpr std::array<std::array<int, 2>, 24> kSkeletonBones{{
    {1, 2},   {2, 21},  {21, 3},  {3, 4},                 // spine, neck, head
    {21, 5},  {5, 6},   {6, 7},   {7, 8},   {8, 22}, {8, 23},    // left arm
    {21, 9},  {9, 10},  {10, 11}, {11, 12}, {12, 24}, {12, 25},  // right arm
    {1, 13},  {13, 14}, {14, 15}, {15, 16},               // left leg
    {1, 17},  {17, 18}, {18, 19}, {19, 20},               // right leg
}};

inline constexpr int kHeadJoint = 4;

/// Undirected graph on `num_joints` nodes; edges hold 0-based node indices.
struct SkeletonGraph {
    std::size_t num_joints = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

SkeletonGraph default_skeleton_graph();

/// Symmetric binary adjacency, zero diagonal. Rejects out-of-range indices,
/// self-loops, and duplicate edges.
Matrix base_adjacency(const SkeletonGraph& graph);

/// All-pairs hop distances by BFS; unreachable pairs get SIZE_MAX.
std::vector<std::vector<std::size_t>> hop_distances(const Matrix& adjacency);

/// Entry (i,j) is 1 iff the shortest-path distance between i and j is exactly k.
Matrix k_hop_adjacency(const Matrix& adjacency, std::size_t k);

/// D^-1 * (M [+ I]); rows with zero degree stay zero.
Matrix normalize_adjacency(const Matrix& m, bool add_self_loops);

struct MultiScaleAdjacency {
    Matrix base;
    std::vector<Matrix> hops;        // disentangled k-hop matrices, k = 0..K
    std::vector<Matrix> normalized;  // row-normalized hops

    std::size_t num_joints() const noexcept { return base.rows(); }
    std::size_t num_scales() const noexcept { return hops.size(); }
};

/// Builds scales 0..max_hop from a base adjacency.
MultiScaleAdjacency build_multiscale(const Matrix& base, std::size_t max_hop);

/// Edge-list form of the spatio-temporal graph: T spatial copies plus
/// same-joint temporal edges between consecutive frames. Node id = t*V + v.
struct SparseGraph {
    std::size_t num_nodes = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted

    Matrix to_dense() const;
};

SparseGraph st_graph(const Matrix& adjacency, std::size_t frames);

struct WindowAdjacency {
    std::size_t tau = 1;
    Matrix block;  // (tau*V) x (tau*V)
};

/// Tiles the V x V matrix into every (a,b) block of a tau x tau grid.
WindowAdjacency window_adjacency(const Matrix& hop, std::size_t tau);

/// Normalized window matrices for scales 0..num_scales-1, as consumed by
/// the G3D layer.
struct WindowSet {
    std::size_t tau = 1;
    std::size_t num_joints = 0;
    std::vector<Matrix> normalized;
};

WindowSet build_window_set(const MultiScaleAdjacency& adj, std::size_t tau, std::size_t num_scales);

/// Relabels nodes: result(perm[i], perm[j]) = m(i, j).
Matrix permute(const Matrix& m, const std::vector<std::size_t>& perm);

}  // namespace actsem
