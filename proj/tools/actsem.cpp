// actsem: command-line front end for the action recognition and tactile
// labeling pipeline. `run` executes the whole chain; the other subcommands
// each expose one stage with file I/O so the chain can be replayed by hand.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "actsem/depth.hpp"
#include "actsem/error.hpp"
#include "actsem/fusion.hpp"
#include "actsem/gcn.hpp"
#include "actsem/graph.hpp"
#include "actsem/matrix.hpp"
#include "actsem/pipeline.hpp"
#include "actsem/skeleton.hpp"
#include "actsem/tactile.hpp"

namespace fs = std::filesystem;
using namespace actsem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitProcessing = 2;

// Error classes caused by unreadable or inconsistent inputs rather than by a
// processing step.
bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io:
        case ErrorCode::Config:
        case ErrorCode::MalformedHeader:
        case ErrorCode::FrameCountMismatch:
        case ErrorCode::NonFiniteCoordinate:
        case ErrorCode::UnsupportedJointCount:
        case ErrorCode::BadMagic:
        case ErrorCode::VersionUnsupported:
        case ErrorCode::DimChainBroken:
        case ErrorCode::TruncatedStream:
        case ErrorCode::BadChecksum:
        case ErrorCode::MalformedImage:
        case ErrorCode::MalformedRecord:
        case ErrorCode::MalformedLine:
        case ErrorCode::BadVersion:
        case ErrorCode::ReservedBitsSet:
        case ErrorCode::DuplicateClassId:
        case ErrorCode::InvalidNodeToken:
        case ErrorCode::GlyphInvariantViolation:
        case ErrorCode::DuplicateGlyph:
            return true;
        default:
            return false;
    }
}

struct CommonOptions {
    std::string config_path;
    std::string output;
    std::string format = "text";
    std::size_t jobs = 1;

    // overrides; unset means "take from config or default"
    std::optional<std::string> model, registry, classes, centroids;
    std::optional<std::size_t> scales, window, length;
    std::optional<double> alpha, threshold, temperature, near_mm, far_mm;
};

PipelineConfig effective_config(const CommonOptions& o) {
    PipelineConfig cfg = o.config_path.empty() ? PipelineConfig{} : load_config_file(o.config_path);
    if (o.model) cfg.model_path = *o.model;
    if (o.registry) cfg.registry_path = *o.registry;
    if (o.classes) cfg.classes_path = *o.classes;
    if (o.centroids) cfg.centroids_path = *o.centroids;
    if (o.scales) cfg.max_hop = *o.scales;
    if (o.window) cfg.window = *o.window;
    if (o.length) cfg.temporal_length = *o.length;
    if (o.alpha) cfg.alpha = *o.alpha;
    if (o.threshold) cfg.roi_threshold = *o.threshold;
    if (o.temperature) cfg.temperature = *o.temperature;
    if (o.near_mm) cfg.depth_range.near_mm = *o.near_mm;
    if (o.far_mm) cfg.depth_range.far_mm = *o.far_mm;
    check_config(cfg);
    return cfg;
}

std::string require(const std::string& value, const char* what) {
    if (value.empty()) throw Error(ErrorCode::Config, std::string(what) + " not given (flag or config)");
    return value;
}

/// Writes to --output when given, stdout otherwise.
void emit(const CommonOptions& o, const std::function<void(std::ostream&)>& write, bool binary = false) {
    if (o.output.empty() || o.output == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(o.output, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + o.output);
    write(out);
    if (!out) throw Error(ErrorCode::Io, "write failed: " + o.output);
}

std::ifstream open_input(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return in;
}

SkeletonGraph load_graph(const std::string& edges_path) {
    if (edges_path.empty()) return default_skeleton_graph();
    auto in = open_input(edges_path);
    SkeletonGraph g;
    if (!(in >> g.num_joints) || g.num_joints == 0) throw Error(ErrorCode::MalformedHeader, "edge file: joint count");
    long long a = 0, b = 0;
    while (in >> a >> b) {
        if (a < 1 || b < 1) throw Error(ErrorCode::InvalidEdgeIndex, "edge file uses 1-based joint numbers");
        g.edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }
    if (!in.eof()) throw Error(ErrorCode::MalformedLine, "edge file: expected pairs of joint numbers");
    return g;
}

DepthMotionImage load_dmi(const std::string& path, const DepthRange& range) {
    auto in = open_input(path, true);
    if (in.peek() == 'P') return dmi_from_pgm(read_pgm(in, range));
    return read_dmi_text(in);
}

ScoreVector named(ScoreVector s, const std::string& classes_path) {
    if (classes_path.empty()) return s;
    const auto classes = load_class_list_file(classes_path);
    if (classes.size() != s.size())
        throw Error(ErrorCode::ClassListMismatch, std::to_string(s.size()) + " scores, " +
                                                      std::to_string(classes.size()) + " classes");
    s.class_names = classes.names();
    return s;
}

TactileGlyph glyph_from(const std::string& tokens, const std::string& registry_path, std::optional<std::size_t> class_id,
                        const std::string& scores_path) {
    if (!tokens.empty()) return parse_glyph_tokens(tokens);
    const auto registry = load_registry_file(require(registry_path, "--registry"));
    if (!scores_path.empty()) return lookup_label(top_prediction(load_scores_file(scores_path)), registry);
    if (!class_id) throw Error(ErrorCode::InvalidArgument, "give glyph tokens, --class, or --scores");
    return lookup_label(*class_id, registry);
}

void print_summary(std::ostream& out, const ModelWeights& m) {
    out << "MSW1 model: " << m.layers.size() << " graph layers, " << m.num_classes() << " classes\n";
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
        if (const auto* g = std::get_if<MsGcnLayer>(&m.layers[i]))
            out << "  [" << i << "] ms-gcn  " << g->conv.in_channels << " -> " << g->conv.out_channels
                << "  scales=" << g->conv.scale_weights.size() << '\n';
        else {
            const auto& w = std::get<G3dLayer>(m.layers[i]);
            out << "  [" << i << "] g3d     " << w.conv.in_channels << " -> " << w.conv.out_channels
                << "  scales=" << w.conv.scale_weights.size() << "  tau=" << w.tau << '\n';
        }
    }
    out << "  head    " << m.head.in_channels << " -> " << m.head.num_classes << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skeleton/depth action recognition with tactile glyph output"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    CommonOptions o;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", o.config_path, "JSON pipeline config")->check(CLI::ExistingFile);
        cmd->add_option("-o,--output", o.output, "Output file (default stdout)");
        cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "tsv"}));
        cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    };

    std::string stage_name;
    std::function<void()> action;
    auto bind = [&](CLI::App* cmd, std::string name, std::function<void()> f) {
        add_common(cmd);
        cmd->callback([&, name, f] {
            stage_name = name;
            action = f;
        });
    };

    // ---- skel ---------------------------------------------------------------
    auto* skel = app.add_subcommand("skel", "Skeleton files (SKL1)");
    skel->require_subcommand(1);
    std::string skel_in;
    int ref_joint = kCenterJoint;

    auto* skel_parse = skel->add_subcommand("parse", "Parse and re-emit in canonical form");
    skel_parse->add_option("input", skel_in, "SKL1 file")->required();
    bind(skel_parse, "skel parse", [&] {
        const auto seq = load_skeleton_file(skel_in);
        emit(o, [&](std::ostream& out) { write_skeleton(out, seq); });
        std::cerr << seq.frames.size() << " frames x " << seq.joint_count() << " joints\n";
    });

    auto* skel_remap = skel->add_subcommand("remap", "Fill in joints 21..25 for 20-joint captures");
    skel_remap->add_option("input", skel_in, "SKL1 file")->required();
    bind(skel_remap, "skel remap", [&] {
        const auto seq = remap_sequence(load_skeleton_file(skel_in));
        emit(o, [&](std::ostream& out) { write_skeleton(out, seq); });
    });

    auto* skel_pre = skel->add_subcommand("preprocess", "Remap, center, scale, and resample");
    skel_pre->add_option("input", skel_in, "SKL1 file")->required();
    skel_pre->add_option("--length", o.length, "Target frame count");
    skel_pre->add_option("--ref", ref_joint, "Reference joint for translation (1..20)");
    bind(skel_pre, "skel preprocess", [&] {
        const auto cfg = effective_config(o);
        const auto seq = load_skeleton_file(skel_in);
        const auto out_seq = quantize_to_storage(resample_temporal(
            normalize_scale(center_translate(remap_sequence(seq), JointId(ref_joint))), cfg.temporal_length));
        emit(o, [&](std::ostream& out) { write_skeleton(out, out_seq); });
    });

    // ---- graph --------------------------------------------------------------
    auto* graph = app.add_subcommand("graph", "Skeleton graph matrices");
    graph->require_subcommand(1);
    std::string edges_path;
    std::size_t hop_k = 0, frames = 1, tau = 1;
    bool normalized = false, self_loops = false;

    auto* graph_build = graph->add_subcommand("build", "Base adjacency, or the spatio-temporal graph with --frames");
    graph_build->add_option("--edges", edges_path, "Edge file: joint count, then 1-based pairs");
    graph_build->add_option("--frames", frames, "Frame count for the spatio-temporal graph");
    bind(graph_build, "graph build", [&] {
        const auto a = base_adjacency(load_graph(edges_path));
        const auto m = frames == 1 ? a : st_graph(a, frames).to_dense();
        emit(o, [&](std::ostream& out) { write_matrix_dump(out, m); });
    });

    auto* graph_khop = graph->add_subcommand("khop", "Exact-distance k-hop adjacency");
    graph_khop->add_option("--edges", edges_path, "Edge file");
    graph_khop->add_option("--k", hop_k, "Hop distance")->required();
    graph_khop->add_flag("--normalized", normalized, "Row-normalize");
    graph_khop->add_flag("--self-loops", self_loops, "Add self-loops before normalizing");
    bind(graph_khop, "graph khop", [&] {
        auto m = k_hop_adjacency(base_adjacency(load_graph(edges_path)), hop_k);
        if (normalized) m = normalize_adjacency(m, self_loops);
        emit(o, [&](std::ostream& out) { write_matrix_dump(out, m); });
    });

    auto* graph_window = graph->add_subcommand("window", "Tiled window adjacency of a k-hop matrix");
    graph_window->add_option("--edges", edges_path, "Edge file");
    graph_window->add_option("--k", hop_k, "Hop distance")->required();
    graph_window->add_option("--tau", tau, "Window length (odd)")->required();
    graph_window->add_flag("--normalized", normalized, "Row-normalize");
    bind(graph_window, "graph window", [&] {
        auto m = window_adjacency(k_hop_adjacency(base_adjacency(load_graph(edges_path)), hop_k), tau).block;
        if (normalized) m = normalize_adjacency(m, false);
        emit(o, [&](std::ostream& out) { write_matrix_dump(out, m); });
    });

    auto* graph_dump = graph->add_subcommand("dump", "All hop matrices 0..K, one dump after another");
    graph_dump->add_option("--edges", edges_path, "Edge file");
    graph_dump->add_option("--scales", o.scales, "Largest hop K");
    graph_dump->add_flag("--normalized", normalized, "Dump the row-normalized forms");
    bind(graph_dump, "graph dump", [&] {
        const auto cfg = effective_config(o);
        const auto adj = build_multiscale(base_adjacency(load_graph(edges_path)), cfg.max_hop);
        emit(o, [&](std::ostream& out) {
            for (const auto& m : normalized ? adj.normalized : adj.hops) write_matrix_dump(out, m);
        });
    });

    // ---- model --------------------------------------------------------------
    auto* model = app.add_subcommand("model", "MSW1 weights and inference");
    model->require_subcommand(1);
    std::string model_in, infer_in;

    auto* model_check = model->add_subcommand("load-check", "Validate a weights file");
    model_check->add_option("input", model_in, "MSW1 file")->required();
    bind(model_check, "model load-check", [&] {
        const auto m = load_weights_file(model_in);
        emit(o, [&](std::ostream& out) { print_summary(out, m); });
    });

    auto* model_infer = model->add_subcommand("infer", "Scores for a preprocessed skeleton file");
    model_infer->add_option("input", infer_in, "Preprocessed SKL1 file")->required();
    model_infer->add_option("--model", o.model, "MSW1 file");
    model_infer->add_option("--classes", o.classes, "Class list");
    model_infer->add_option("--scales", o.scales, "Largest hop K");
    bind(model_infer, "model infer", [&] {
        const auto cfg = effective_config(o);
        const auto m = load_weights_file(require(cfg.model_path, "--model"));
        const auto adj = build_multiscale(base_adjacency(default_skeleton_graph()), cfg.max_hop);
        const auto scores = named(infer(load_skeleton_file(infer_in), m, adj), cfg.classes_path);
        emit(o, [&](std::ostream& out) { write_scores(out, scores); });
    });

    // ---- dmi ----------------------------------------------------------------
    auto* dmi = app.add_subcommand("dmi", "Depth motion images");
    dmi->require_subcommand(1);
    std::string dmi_in;
    std::size_t dmi_start = 0, dmi_count = 0;

    auto* dmi_compute = dmi->add_subcommand("compute", "DMI from a directory of PGM frames");
    dmi_compute->add_option("input", dmi_in, "Directory of .pgm frames")->required();
    dmi_compute->add_option("--start", dmi_start, "First frame index");
    dmi_compute->add_option("--count", dmi_count, "Number of frames (default: all from --start)");
    dmi_compute->add_option("--near", o.near_mm, "16-bit mapping near plane (mm)");
    dmi_compute->add_option("--far", o.far_mm, "16-bit mapping far plane (mm)");
    bind(dmi_compute, "dmi compute", [&] {
        const auto cfg = effective_config(o);
        auto seq = load_depth_directory(dmi_in, cfg.depth_range);
        seq.start = dmi_start;
        seq.count = dmi_count ? dmi_count : (seq.frames.size() > dmi_start ? seq.frames.size() - dmi_start : 0);
        const auto img = compute_dmi(seq);
        if (o.format == "tsv") emit(o, [&](std::ostream& out) { write_dmi_text(out, img); });
        else emit(o, [&](std::ostream& out) { write_dmi_pgm(out, img); }, true);
    });

    auto* dmi_norm = dmi->add_subcommand("normalize", "Divide by the image maximum");
    dmi_norm->add_option("input", dmi_in, "Raw DMI (PGM or text)")->required();
    bind(dmi_norm, "dmi normalize", [&] {
        const auto img = normalize_dmi(load_dmi(dmi_in, effective_config(o).depth_range));
        emit(o, [&](std::ostream& out) { write_dmi_text(out, img); });
    });

    auto* dmi_crop = dmi->add_subcommand("crop", "Crop to the informative region");
    dmi_crop->add_option("input", dmi_in, "DMI (PGM or text)")->required();
    dmi_crop->add_option("--threshold", o.threshold, "Pixels above this value are informative");
    bind(dmi_crop, "dmi crop", [&] {
        const auto cfg = effective_config(o);
        const auto img = crop_roi(load_dmi(dmi_in, cfg.depth_range), cfg.roi_threshold);
        emit(o, [&](std::ostream& out) { write_dmi_text(out, img); });
    });

    auto* dmi_classify = dmi->add_subcommand("classify", "Nearest-centroid scores");
    dmi_classify->add_option("input", dmi_in, "DMI (PGM or text)")->required();
    dmi_classify->add_option("--centroids", o.centroids, "Centroid file");
    dmi_classify->add_option("--temperature", o.temperature, "Softmax temperature");
    bind(dmi_classify, "dmi classify", [&] {
        const auto cfg = effective_config(o);
        const auto set = load_centroids_file(require(cfg.centroids_path, "--centroids"));
        const auto scores = nearest_centroid_classify(load_dmi(dmi_in, cfg.depth_range), set, cfg.temperature);
        emit(o, [&](std::ostream& out) { write_scores(out, scores); });
    });

    // ---- fuse ---------------------------------------------------------------
    auto* fuse = app.add_subcommand("fuse", "Combine skeleton and depth score files");
    std::string skel_scores, depth_scores;
    bool product = false;
    fuse->add_option("--skeleton", skel_scores, "Skeleton-stream scores")->required();
    fuse->add_option("--depth", depth_scores, "Depth-stream scores (omit for skeleton only)");
    fuse->add_option("--alpha", o.alpha, "Skeleton weight in [0,1]");
    fuse->add_flag("--product", product, "Weighted geometric fusion instead of the weighted sum");
    bind(fuse, "fuse", [&] {
        const auto cfg = effective_config(o);
        const auto s = load_scores_file(skel_scores);
        const FusionRule rule = product ? FusionRule::Product : cfg.fusion_rule;
        const auto fused = depth_scores.empty() ? fuse_scores(s, s, {1.0, rule})
                                                : fuse_scores(s, load_scores_file(depth_scores), {cfg.alpha, rule});
        emit(o, [&](std::ostream& out) { write_scores(out, fused); });
    });

    // ---- eval ---------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "Trial tallies over prediction records");
    eval->require_subcommand(1);
    std::string records_in;

    auto* eval_tally = eval->add_subcommand("tally", "Per-action score and confusions");
    eval_tally->add_option("input", records_in, "Records: id<TAB>true<TAB>predicted")->required();
    eval_tally->add_option("--classes", o.classes, "Class list");
    bind(eval_tally, "eval tally", [&] {
        const auto classes = load_class_list_file(require(effective_config(o).classes_path, "--classes"));
        auto in = open_input(records_in);
        const auto table = trial_tally(read_records(in, classes), classes);
        emit(o, [&](std::ostream& out) {
            if (o.format == "tsv") {
                for (const auto& row : table.rows) {
                    out << classes.name(row.class_id) << '\t' << score_text(row) << '\t';
                    bool first = true;
                    for (const auto& [cls, count] : row.confusions) {
                        out << (first ? "" : ",") << classes.name(cls) << ':' << count;
                        first = false;
                    }
                    out << '\n';
                }
            } else {
                out << render_table(table, classes);
            }
        });
    });

    auto* eval_conf = eval->add_subcommand("confusion", "Dense confusion matrix");
    eval_conf->add_option("input", records_in, "Records file")->required();
    eval_conf->add_option("--classes", o.classes, "Class list");
    bind(eval_conf, "eval confusion", [&] {
        const auto classes = load_class_list_file(require(effective_config(o).classes_path, "--classes"));
        auto in = open_input(records_in);
        const auto m = confusion_matrix(read_records(in, classes), classes);
        emit(o, [&](std::ostream& out) {
            if (o.format == "tsv") write_matrix_dump(out, m);
            else out << render_confusion(m, classes);
        });
    });

    // ---- glyph --------------------------------------------------------------
    auto* glyph = app.add_subcommand("glyph", "Tactile glyphs and device frames");
    glyph->require_subcommand(1);
    std::string glyph_tokens_in, registry_in, scores_in, hex_in;
    std::optional<std::size_t> class_id;
    bool relaxed = false;
    auto glyph_source = [&](CLI::App* cmd) {
        cmd->add_option("tokens", glyph_tokens_in, "Nine node tokens, e.g. \"00 F 00 ...\"");
        cmd->add_option("--registry", o.registry, "TGR1 registry");
        cmd->add_option("--class", class_id, "Class id to look up in the registry");
        cmd->add_option("--scores", scores_in, "Score file; its top class is looked up");
    };
    auto current_glyph = [&] {
        const auto cfg = effective_config(o);
        return glyph_from(glyph_tokens_in, cfg.registry_path, class_id, scores_in);
    };

    auto* glyph_validate = glyph->add_subcommand("validate", "Report glyph rule violations");
    glyph_source(glyph_validate);
    glyph_validate->add_flag("--relaxed", relaxed, "Allow any number of FULL nodes");
    int validate_status = kExitOk;
    bind(glyph_validate, "glyph validate", [&] {
        const auto report = validate_glyph(current_glyph(), relaxed ? ValidationMode::Relaxed : ValidationMode::Registry);
        emit(o, [&](std::ostream& out) {
            if (report.ok()) out << "ok\n";
            for (auto v : report.violations) out << to_string(v) << '\n';
        });
        if (!report.ok()) validate_status = kExitProcessing;
    });

    auto* glyph_encode = glyph->add_subcommand("encode", "TGF1 frame as hex");
    glyph_source(glyph_encode);
    bind(glyph_encode, "glyph encode", [&] {
        const auto frame = encode_frame(current_glyph());
        emit(o, [&](std::ostream& out) { out << to_hex(frame) << '\n'; });
    });

    auto* glyph_decode = glyph->add_subcommand("decode", "Glyph tokens from a hex frame");
    glyph_decode->add_option("hex", hex_in, "44 hex digits")->required();
    bind(glyph_decode, "glyph decode", [&] {
        const auto g = decode_frame(from_hex(hex_in));
        emit(o, [&](std::ostream& out) { out << glyph_tokens(g) << '\n'; });
    });

    auto* glyph_render = glyph->add_subcommand("render", "ASCII preview");
    glyph_source(glyph_render);
    bind(glyph_render, "glyph render", [&] {
        const auto g = current_glyph();
        emit(o, [&](std::ostream& out) { out << render_ascii(g); });
    });

    auto* glyph_reg = glyph->add_subcommand("registry-check", "Load and validate a registry");
    glyph_reg->add_option("input", registry_in, "TGR1 registry")->required();
    bind(glyph_reg, "glyph registry-check", [&] {
        const auto reg = load_registry_file(registry_in);
        emit(o, [&](std::ostream& out) {
            if (o.format == "tsv") write_registry(out, reg);
            else out << reg.size() << " entries ok\n";
        });
    });

    // ---- run ----------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Full pipeline over a set of sequences");
    std::string run_skeleton;
    std::optional<std::string> run_depth, run_scores;
    bool preview = false;
    run->add_option("--skeleton", run_skeleton, "SKL1 file or directory of .skl files")->required();
    run->add_option("--depth", run_depth, "Directory holding one PGM frame directory per sequence id");
    run->add_option("--depth-scores", run_scores, "Directory of <id>.scores files (external depth stream)");
    run->add_option("--model", o.model, "MSW1 file");
    run->add_option("--registry", o.registry, "TGR1 registry");
    run->add_option("--classes", o.classes, "Class list");
    run->add_option("--centroids", o.centroids, "Centroid file");
    run->add_option("--alpha", o.alpha, "Skeleton weight in [0,1]");
    run->add_option("--length", o.length, "Temporal length");
    run->add_flag("--preview", preview, "Append an ASCII glyph preview per sequence (text format)");
    bind(run, "run", [&] {
        if (run_depth && run_scores) throw Error(ErrorCode::Config, "use either --depth or --depth-scores");
        PipelineConfig cfg;
        try {
            cfg = effective_config(o);
        } catch (const Error& e) {
            throw StageError("config", "", e.code(), e.what());
        }
        const auto res = load_resources(cfg);
        const auto inputs = discover_inputs(run_skeleton, run_depth, run_scores);
        const auto results = run_pipeline(inputs, res, o.jobs);
        emit(o, [&](std::ostream& out) {
            for (const auto& r : results) {
                out << result_record(r) << '\n';
                if (preview && o.format == "text") out << render_ascii(r.glyph) << '\n';
            }
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (action) action();
    } catch (const StageError& e) {
        std::cerr << "actsem: " << e.what() << '\n';
        return e.input_error() ? kExitInput : kExitProcessing;
    } catch (const Error& e) {
        std::cerr << "actsem: [" << stage_name << "] " << e.what() << '\n';
        return is_input_error(e.code()) ? kExitInput : kExitProcessing;
    } catch (const std::exception& e) {
        std::cerr << "actsem: [" << stage_name << "] " << e.what() << '\n';
        return kExitProcessing;
    }
    return validate_status;
}
