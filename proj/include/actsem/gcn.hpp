#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "actsem/graph.hpp"
#include "actsem/matrix.hpp"
#include "actsem/skeleton.hpp"

namespace actsem {

/// Feature map laid out T-major, then joint, then channel.
class FeatureTensor {
public:
    FeatureTensor() = default;
    FeatureTensor(std::size_t frames, std::size_t joints, std::size_t channels, double fill = 0.0)
        : t_(frames), v_(joints), c_(channels), values_(frames * joints * channels, fill) {}

    std::size_t frames() const noexcept { return t_; }
    std::size_t joints() const noexcept { return v_; }
    std::size_t channels() const noexcept { return c_; }

    double& at(std::size_t t, std::size_t v, std::size_t c) { return values_[(t * v_ + v) * c_ + c]; }
    double at(std::size_t t, std::size_t v, std::size_t c) const { return values_[(t * v_ + v) * c_ + c]; }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;

private:
    std::size_t t_ = 0, v_ = 0, c_ = 0;
    std::vector<double> values_;
};

/// xyz coordinates as three input channels.
FeatureTensor to_features(const SkeletonSequence& seq);

struct ScoreVector {
    std::vector<double> scores;
    std::vector<std::string> class_names;  // may be empty when names are unknown

    std::size_t size() const noexcept { return scores.size(); }
    friend bool operator==(const ScoreVector&, const ScoreVector&) = default;
};

/// Per-scale weights shared by the spatial and the windowed layer.
struct GraphConvWeights {
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::vector<Matrix> scale_weights;  // one in x out matrix per scale
    std::vector<double> bias;           // out_channels

    friend bool operator==(const GraphConvWeights&, const GraphConvWeights&) = default;
};

struct MsGcnLayer {
    GraphConvWeights conv;
    friend bool operator==(const MsGcnLayer&, const MsGcnLayer&) = default;
};

struct G3dLayer {
    std::size_t tau = 1;
    GraphConvWeights conv;
    friend bool operator==(const G3dLayer&, const G3dLayer&) = default;
};

struct ClassifierHead {
    std::size_t in_channels = 0;
    std::size_t num_classes = 0;
    Matrix weights;  // in_channels x num_classes
    friend bool operator==(const ClassifierHead&, const ClassifierHead&) = default;
};

using Layer = std::variant<MsGcnLayer, G3dLayer>;

struct ModelWeights {
    std::vector<Layer> layers;
    ClassifierHead head;

    std::size_t num_classes() const noexcept { return head.num_classes; }
    /// Largest scale count used by any layer; the adjacency must provide at
    /// least this many hop matrices.
    std::size_t max_scales() const;

    friend bool operator==(const ModelWeights&, const ModelWeights&) = default;
};

/// Checks matrix shapes, scale counts, window lengths, and that channel
/// dimensions chain from 3 input channels through every layer to the head.
/// Throws DimChainBroken (or EvenWindow).
void validate(const ModelWeights& model);

enum class Activation { Relu, Identity };

FeatureTensor ms_gcn_layer(const FeatureTensor& x, const MultiScaleAdjacency& adj, const MsGcnLayer& layer,
                           Activation act = Activation::Relu);

FeatureTensor g3d_layer(const FeatureTensor& x, const WindowSet& windows, const G3dLayer& layer,
                        Activation act = Activation::Relu);

ScoreVector global_pool_and_classify(const FeatureTensor& x, const ClassifierHead& head);

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

ScoreVector infer(const SkeletonSequence& seq, const ModelWeights& model, const MultiScaleAdjacency& adj);
ScoreVector infer_features(const FeatureTensor& x, const ModelWeights& model, const MultiScaleAdjacency& adj);

// MSW1 binary weights format.
inline constexpr std::array<std::uint8_t, 4> kMswMagic{0x4D, 0x53, 0x57, 0x31};
inline constexpr std::uint8_t kMswVersion = 0x01;
inline constexpr std::uint8_t kLayerMsGcn = 0x01;
inline constexpr std::uint8_t kLayerG3d = 0x02;
inline constexpr std::uint8_t kLayerHead = 0x03;

ModelWeights load_weights(std::span<const std::uint8_t> bytes);
ModelWeights load_weights_file(const std::string& path);
std::vector<std::uint8_t> save_weights(const ModelWeights& model);

}  // namespace actsem
