#include "actsem/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "actsem/matrix.hpp"

namespace actsem {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).lexically_normal().string();
}

}  // namespace

void check_config(const PipelineConfig& cfg) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::Config, what); };
    if (cfg.window == 0 || cfg.window % 2 == 0) fail("'window' must be a positive odd integer");
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) fail("'alpha' must lie in [0,1]");
    if (cfg.temporal_length == 0) fail("'temporal_length' must be positive");
    if (!(cfg.depth_range.far_mm > cfg.depth_range.near_mm) || cfg.depth_range.near_mm < 0.0)
        fail("depth range requires 0 <= near < far");
    if (!(cfg.roi_threshold >= 0.0)) fail("'roi_threshold' must be >= 0");
    if (!(cfg.temperature > 0.0)) fail("'temperature' must be positive");
}

PipelineConfig parse_config(std::istream& in, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");

    PipelineConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "model") cfg.model_path = resolve(base_dir, value.get<std::string>());
            else if (key == "registry") cfg.registry_path = resolve(base_dir, value.get<std::string>());
            else if (key == "classes") cfg.classes_path = resolve(base_dir, value.get<std::string>());
            else if (key == "centroids") cfg.centroids_path = resolve(base_dir, value.get<std::string>());
            else if (key == "scales") cfg.max_hop = value.get<std::size_t>();
            else if (key == "window") cfg.window = value.get<std::size_t>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "temporal_length") cfg.temporal_length = value.get<std::size_t>();
            else if (key == "depth_near_mm") cfg.depth_range.near_mm = value.get<double>();
            else if (key == "depth_far_mm") cfg.depth_range.far_mm = value.get<double>();
            else if (key == "roi_threshold") cfg.roi_threshold = value.get<double>();
            else if (key == "temperature") cfg.temperature = value.get<double>();
            else if (key == "fusion") {
                const auto rule = value.get<std::string>();
                if (rule == "weighted") cfg.fusion_rule = FusionRule::Weighted;
                else if (rule == "product") cfg.fusion_rule = FusionRule::Product;
                else throw Error(ErrorCode::Config, "'fusion' must be 'weighted' or 'product'");
            } else {
                throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Config, "config key '" + key + "': " + e.what());
        }
    }
    check_config(cfg);
    return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
    return parse_config(in, fs::path(path).parent_path().string());
}

StageError::StageError(std::string stage, std::string sequence_id, ErrorCode code, const std::string& detail)
    : std::runtime_error("[" + stage + "]" + (sequence_id.empty() ? "" : " sequence '" + sequence_id + "'") + ": " +
                         detail),
      stage_(std::move(stage)),
      sequence_id_(std::move(sequence_id)),
      code_(code) {}

bool StageError::input_error() const noexcept {
    static constexpr std::string_view input_stages[] = {"config",         "load-model", "load-registry",
                                                        "load-classes",   "load-centroids", "inputs",
                                                        "parse",          "depth-load", "depth-scores"};
    return std::find(std::begin(input_stages), std::end(input_stages), stage_) != std::end(input_stages);
}

namespace {

template <typename F>
auto stage(const std::string& name, const std::string& sequence_id, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw StageError(name, sequence_id, e.code(), e.what());
    }
}

}  // namespace

PipelineResources load_resources(const PipelineConfig& cfg) {
    PipelineResources res;
    stage("config", "", [&] {
        check_config(cfg);
        if (cfg.model_path.empty()) throw Error(ErrorCode::Config, "'model' path is required");
        if (cfg.registry_path.empty()) throw Error(ErrorCode::Config, "'registry' path is required");
        if (cfg.classes_path.empty()) throw Error(ErrorCode::Config, "'classes' path is required");
    });
    res.config = cfg;
    res.model = stage("load-model", "", [&] { return load_weights_file(cfg.model_path); });
    res.registry = stage("load-registry", "", [&] { return load_registry_file(cfg.registry_path); });
    res.classes = stage("load-classes", "", [&] { return load_class_list_file(cfg.classes_path); });
    if (!cfg.centroids_path.empty())
        res.centroids = stage("load-centroids", "", [&] { return load_centroids_file(cfg.centroids_path); });

    stage("config", "", [&] {
        if (res.model.num_classes() != res.classes.size())
            throw Error(ErrorCode::ClassListMismatch, "model " + cfg.model_path + " predicts " +
                                                          std::to_string(res.model.num_classes()) +
                                                          " classes, class list has " +
                                                          std::to_string(res.classes.size()));
        for (std::size_t c = 0; c < res.classes.size(); ++c)
            if (!res.registry.contains(c))
                throw Error(ErrorCode::UnknownClass, "registry " + cfg.registry_path + " has no glyph for class " +
                                                         std::to_string(c) + " (" + res.classes.name(c) + ")");
        if (res.centroids && res.centroids->class_names != res.classes.names())
            throw Error(ErrorCode::ClassListMismatch, "centroid classes differ from the class list");
        if (res.model.max_scales() > cfg.max_hop + 1)
            throw Error(ErrorCode::DimMismatch, "model uses " + std::to_string(res.model.max_scales()) +
                                                    " scales, config provides " + std::to_string(cfg.max_hop + 1));
        for (const auto& layer : res.model.layers)
            if (const auto* g3d = std::get_if<G3dLayer>(&layer); g3d && g3d->tau != cfg.window)
                throw Error(ErrorCode::DimMismatch, "model window " + std::to_string(g3d->tau) + " differs from config window " +
                                                        std::to_string(cfg.window));
    });
    res.adjacency = build_multiscale(base_adjacency(default_skeleton_graph()), cfg.max_hop);
    return res;
}

std::vector<SequenceInput> discover_inputs(const std::string& skeleton, const std::optional<std::string>& depth_root,
                                           const std::optional<std::string>& scores_root) {
    return stage("inputs", "", [&] {
        std::vector<std::string> files;
        std::error_code ec;
        if (fs::is_directory(skeleton, ec)) {
            for (const auto& entry : fs::directory_iterator(skeleton))
                if (entry.is_regular_file() && entry.path().extension() == ".skl") files.push_back(entry.path().string());
            std::sort(files.begin(), files.end());
            if (files.empty()) throw Error(ErrorCode::Io, "no .skl files in " + skeleton);
        } else if (fs::is_regular_file(skeleton, ec)) {
            files.push_back(skeleton);
        } else {
            throw Error(ErrorCode::Io, "skeleton input " + skeleton + " does not exist");
        }
        std::vector<SequenceInput> inputs;
        for (const auto& f : files) {
            SequenceInput in;
            in.sequence_id = fs::path(f).stem().string();
            in.skeleton_path = f;
            if (depth_root) {
                const auto dir = fs::path(*depth_root) / in.sequence_id;
                if (!fs::is_directory(dir, ec))
                    throw Error(ErrorCode::Io, "no depth frames for '" + in.sequence_id + "' under " + *depth_root);
                in.depth_dir = dir.string();
            }
            if (scores_root) {
                const auto file = fs::path(*scores_root) / (in.sequence_id + ".scores");
                if (!fs::is_regular_file(file, ec))
                    throw Error(ErrorCode::Io, "no depth scores for '" + in.sequence_id + "' under " + *scores_root);
                in.depth_scores = file.string();
            }
            inputs.push_back(std::move(in));
        }
        return inputs;
    });
}

SkeletonSequence quantize_to_storage(const SkeletonSequence& seq) {
    return parse_skeleton_string(serialize_skeleton(seq));
}

DepthMotionImage depth_descriptor(const DepthSequence& seq, double roi_threshold) {
    return crop_roi(normalize_dmi(compute_dmi(seq)), roi_threshold);
}

SequenceResult run_sequence(const SequenceInput& input, const PipelineResources& res) {
    const auto& cfg = res.config;
    const auto& id = input.sequence_id;
    SequenceResult out;
    out.sequence_id = id;

    auto seq = stage("parse", id, [&] { return load_skeleton_file(input.skeleton_path); });
    seq = stage("remap", id, [&] { return remap_sequence(seq); });
    seq = stage("center", id, [&] { return center_translate(seq); });
    seq = stage("scale", id, [&] { return normalize_scale(seq); });
    seq = stage("resample", id, [&] { return quantize_to_storage(resample_temporal(seq, cfg.temporal_length)); });
    out.skeleton_scores = stage("infer", id, [&] { return infer(seq, res.model, res.adjacency); });
    out.skeleton_scores.class_names = res.classes.names();

    if (input.depth_scores) {
        out.depth_scores = stage("depth-scores", id, [&] { return load_scores_file(*input.depth_scores); });
    } else if (input.depth_dir) {
        const auto frames = stage("depth-load", id, [&] { return load_depth_directory(*input.depth_dir, cfg.depth_range); });
        const auto dmi = stage("dmi", id, [&] { return depth_descriptor(frames, cfg.roi_threshold); });
        out.depth_scores = stage("depth-classify", id, [&] {
            if (!res.centroids) throw Error(ErrorCode::Config, "depth input needs 'centroids' in the config");
            return nearest_centroid_classify(dmi, *res.centroids, cfg.temperature);
        });
    }

    out.fused = stage("fuse", id, [&] {
        if (!out.depth_scores) return fuse_scores(out.skeleton_scores, out.skeleton_scores, FusionConfig{1.0, cfg.fusion_rule});
        return fuse_scores(out.skeleton_scores, *out.depth_scores, FusionConfig{cfg.alpha, cfg.fusion_rule});
    });
    out.class_id = stage("predict", id, [&] { return top_prediction(out.fused); });
    out.class_name = res.classes.name(out.class_id);
    out.glyph = stage("label", id, [&] { return lookup_label(out.class_id, res.registry); });
    out.frame = encode_frame(out.glyph);
    return out;
}

std::vector<SequenceResult> run_pipeline(const std::vector<SequenceInput>& inputs, const PipelineResources& res,
                                         std::size_t jobs) {
    std::vector<std::optional<SequenceResult>> results(inputs.size());
    std::vector<std::exception_ptr> errors(inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            try {
                results[i] = run_sequence(inputs[i], res);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, inputs.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    // first failure in input order, independent of scheduling
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<SequenceResult> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

std::string result_record(const SequenceResult& r) {
    return r.sequence_id + '\t' + std::to_string(r.class_id) + '\t' + r.class_name + '\t' + format_9g(r.top_score()) +
           '\t' + to_hex(r.frame);
}

}  // namespace actsem
