#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actsem/depth.hpp"
#include "actsem/error.hpp"
#include "actsem/fusion.hpp"
#include "actsem/gcn.hpp"
#include "actsem/graph.hpp"
#include "actsem/skeleton.hpp"
#include "actsem/tactile.hpp"

namespace actsem {

struct PipelineConfig {
    std::string model_path;
    std::string registry_path;
    std::string classes_path;
    std::string centroids_path;  // optional; needed for depth input without external scores
    std::size_t max_hop = 3;     // adjacency scales 0..max_hop
    std::size_t window = 3;      // G3D window length
    double alpha = 0.5;
    FusionRule fusion_rule = FusionRule::Weighted;
    std::size_t temporal_length = 16;
    DepthRange depth_range;
    double roi_threshold = 0.0;
    double temperature = 1.0;
};

/// JSON config; relative paths resolve against `base_dir`. Unknown keys are
/// rejected. Throws Error(Config) on bad values. Paths may be left out here;
/// load_resources insists on model, registry, and classes.
PipelineConfig parse_config(std::istream& in, const std::string& base_dir = ".");
PipelineConfig load_config_file(const std::string& path);
/// Range checks shared by the file loader and flag overrides.
void check_config(const PipelineConfig& cfg);

/// A failure inside the pipeline, tagged with the stage and sequence.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, std::string sequence_id, ErrorCode code, const std::string& detail);

    const std::string& stage() const noexcept { return stage_; }
    const std::string& sequence_id() const noexcept { return sequence_id_; }
    ErrorCode code() const noexcept { return code_; }
    /// True for stages that read inputs or configuration (exit code 1);
    /// false for processing stages (exit code 2).
    bool input_error() const noexcept;

private:
    std::string stage_;
    std::string sequence_id_;
    ErrorCode code_;
};

/// Everything loaded once and shared read-only by all sequences.
struct PipelineResources {
    PipelineConfig config;
    ModelWeights model;
    LabelRegistry registry;
    ClassList classes;
    std::optional<CentroidSet> centroids;
    MultiScaleAdjacency adjacency;
};

PipelineResources load_resources(const PipelineConfig& cfg);

struct SequenceInput {
    std::string sequence_id;
    std::string skeleton_path;
    std::optional<std::string> depth_dir;     // PGM frames
    std::optional<std::string> depth_scores;  // external score file
};

/// Pairs `<id>.skl` files with `<depth_root>/<id>/` frame directories and
/// `<scores_root>/<id>.scores` files. `skeleton` may be a file or directory.
std::vector<SequenceInput> discover_inputs(const std::string& skeleton, const std::optional<std::string>& depth_root,
                                           const std::optional<std::string>& scores_root);

struct SequenceResult {
    std::string sequence_id;
    std::size_t class_id = 0;
    std::string class_name;
    ScoreVector skeleton_scores;
    std::optional<ScoreVector> depth_scores;
    ScoreVector fused;
    TactileGlyph glyph;
    DeviceFrame frame{};

    double top_score() const { return fused.scores.at(class_id); }
};

/// Preprocessed sequences are quantized to SKL1 storage precision so that
/// file-based stage chains reproduce in-memory runs exactly.
SkeletonSequence quantize_to_storage(const SkeletonSequence& seq);

/// DMI -> normalize -> crop for one depth clip.
DepthMotionImage depth_descriptor(const DepthSequence& seq, double roi_threshold);

SequenceResult run_sequence(const SequenceInput& input, const PipelineResources& res);
/// Processes sequences on `jobs` threads; results come back in input order.
std::vector<SequenceResult> run_pipeline(const std::vector<SequenceInput>& inputs, const PipelineResources& res,
                                         std::size_t jobs = 1);

/// `sequence_id<TAB>class_id<TAB>class_name<TAB>score<TAB>frame_hex`.
std::string result_record(const SequenceResult& r);

}  // namespace actsem
