// Regenerates the shipped fixture set under the given directory:
//
//   make_fixtures <out_dir>
//
// Everything is derived from fixed seeds, so rerunning reproduces the
// committed files byte for byte on the same toolchain.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "actsem/depth.hpp"
#include "actsem/fusion.hpp"
#include "actsem/gcn.hpp"
#include "actsem/pipeline.hpp"
#include "actsem/skeleton.hpp"
#include "actsem/tactile.hpp"

namespace fs = std::filesystem;
using namespace actsem;

namespace {

// Actions exercised in the live trials, in class-id order.
const std::vector<std::string> kActions = {
    "Drink",        "Brush teeth", "Brush hair",  "Eat meal/snacks",   "Phone call",
    "Playing with/using phone",    "Throw",       "Sit down",          "Stand up",
    "Clapping",     "Hand waving", "Jump up",     "Kicking something", "Falling",
    "Fan self",     "Writing",     "Reading",     "Take off/put on shoes", "Wipe face",
};

// Glyph tokens per action, row-major. F = head; segment masks use bit 0 = top,
// clockwise in 45 degree steps (01 N, 02 NE, 04 E, 08 SE, 10 S, 20 SW, 40 W, 80 NW).
const std::vector<std::string> kGlyphs = {
    "00 F 00 00 15 81 00 29 00",  // Drink: right forearm up to the mouth
    "00 F 00 00 15 82 00 29 00",  // Brush teeth
    "00 F 80 00 15 01 00 29 00",  // Brush hair: hand above the head
    "00 F 00 02 51 81 00 29 00",  // Eat meal/snacks
    "00 F 20 00 15 01 00 29 00",  // Phone call: hand at the ear
    "00 F 00 00 55 00 00 29 00",  // Playing with/using phone: both forearms forward
    "00 F 02 00 15 00 00 29 00",  // Throw: arm raised behind
    "00 F 00 00 15 00 00 2C 00",  // Sit down: bent legs
    "00 F 00 00 15 00 00 11 00",  // Stand up: straight legs
    "00 F 00 04 11 40 00 29 00",  // Clapping: hands meeting in front
    "00 F 01 00 15 20 00 29 00",  // Hand waving
    "02 F 80 00 11 00 00 29 00",  // Jump up: both arms raised
    "00 F 00 00 15 00 00 21 0C",  // Kicking something: one leg out
    "00 00 00 F 44 00 00 00 00",  // Falling: body horizontal
    "00 F 10 00 15 20 00 29 00",  // Fan self
    "00 F 00 00 15 08 00 29 00",  // Writing: hand low in front
    "00 F 00 08 15 20 00 29 00",  // Reading: both hands holding in front
    "00 F 00 00 19 00 00 29 0A",  // Take off/put on shoes: reaching down
    "00 F 40 00 15 80 00 29 00",  // Wipe face
};

// Rows of the live-trial table: action, correct of 10, wrong predictions.
struct TrialRow {
    std::string action;
    int correct;
    std::vector<std::pair<std::string, int>> confusions;
};

const std::vector<TrialRow> kTrialRows = {
    {"Drink", 10, {}},
    {"Brush teeth", 6, {{"Phone call", 4}}},
    {"Brush hair", 8, {{"Touch neck", 1}, {"Phone call", 1}}},
    {"Eat meal/snacks", 10, {}},
    {"Throw", 7, {{"Salute", 3}}},
    {"Sit down", 5, {{"Take off/put on shoes", 5}}},
    {"Stand up", 8, {{"Head-shake", 2}}},
    {"Jump up", 9, {{"Stand up", 1}}},
    {"Clapping", 2, {{"Writing", 3}, {"Reading", 3}, {"Playing with/using phone", 2}}},
    {"Hand waving", 6, {{"Fan self", 4}}},
    {"Playing with/using phone", 8, {{"Writing", 2}}},
    {"Phone call", 8, {{"Brush teeth", 2}}},
    {"Kicking something", 10, {}},
    {"Falling", 5, {{"Take off/put on shoes", 5}}},
    {"Fan self", 10, {}},
    {"Writing", 5, {{"Reading", 3}, {"Playing with/using phone", 2}}},
    {"Reading", 6, {{"Writing", 2}, {"Playing with/using phone", 2}}},
    {"Take off/put on shoes", 10, {}},
};

const std::vector<std::string> kTableTwo = {"Clapping", "Phone call", "Drinking", "Eat meal/snacks",
                                            "Hand-wave", "Kicking something", "Touch head"};
const std::vector<std::string> kTableTwoGlyphs = {
    kGlyphs[9], kGlyphs[4], kGlyphs[0], kGlyphs[3], kGlyphs[10], kGlyphs[12],
    "00 F 00 00 15 02 00 29 00",  // Touch head
};

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Standing pose, 25 joints, metres; the subject faces the sensor ~2.5 m away.
std::vector<Vec3> rest_pose() {
    return {
        {0.00, 0.00, 2.50},   {0.00, 0.30, 2.50},   {0.00, 0.60, 2.50},   {0.00, 0.75, 2.48},   // 1-4
        {-0.18, 0.52, 2.50},  {-0.25, 0.28, 2.52},  {-0.28, 0.05, 2.50},  {-0.29, -0.02, 2.49}, // 5-8
        {0.18, 0.52, 2.50},   {0.25, 0.28, 2.52},   {0.28, 0.05, 2.50},   {0.29, -0.02, 2.49},  // 9-12
        {-0.09, -0.02, 2.50}, {-0.10, -0.45, 2.52}, {-0.10, -0.85, 2.53}, {-0.10, -0.90, 2.43}, // 13-16
        {0.09, -0.02, 2.50},  {0.10, -0.45, 2.52},  {0.10, -0.85, 2.53},  {0.10, -0.90, 2.43},  // 17-20
        {0.00, 0.52, 2.50},   {-0.29, -0.08, 2.49}, {-0.27, -0.04, 2.47}, {0.29, -0.08, 2.49},  // 21-24
        {0.27, -0.04, 2.47},                                                                     // 25
    };
}

enum class Motion { Wave, Drink, Kick };

SkeletonSequence make_sequence(Motion motion, std::size_t frames, bool v1, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.004);
    SkeletonSequence seq;
    seq.frame_rate_hz = 30.0;
    for (std::size_t t = 0; t < frames; ++t) {
        const double phase = 2.0 * M_PI * static_cast<double>(t) / static_cast<double>(frames);
        auto pose = rest_pose();
        auto move = [&](int joint, double dx, double dy, double dz) {
            pose[joint - 1].x += dx;
            pose[joint - 1].y += dy;
            pose[joint - 1].z += dz;
        };
        switch (motion) {
            case Motion::Wave:
                // right forearm raised and swinging sideways
                move(10, 0.05, 0.20, 0.0);
                for (int j : {11, 12, 24, 25}) move(j, 0.10 + 0.12 * std::sin(2 * phase), 0.55, -0.05);
                break;
            case Motion::Drink: {
                const double lift = 0.5 * (1.0 - std::cos(phase));
                move(10, -0.05 * lift, 0.10 * lift, -0.15 * lift);
                for (int j : {11, 12, 24, 25}) move(j, -0.22 * lift, 0.62 * lift, -0.20 * lift);
                break;
            }
            case Motion::Kick: {
                const double swing = std::max(0.0, std::sin(phase));
                move(18, 0.0, 0.15 * swing, -0.30 * swing);
                for (int j : {19, 20}) move(j, 0.0, 0.35 * swing, -0.60 * swing);
                break;
            }
        }
        SkeletonFrame frame;
        for (const auto& p : pose) frame.joints.push_back({p.x + noise(rng), p.y + noise(rng), p.z + noise(rng)});
        frame.valid.assign(frame.joints.size(), true);
        if (v1) {
            frame.joints.resize(kV1JointCount);
            frame.valid.resize(kV1JointCount);
        }
        seq.frames.push_back(std::move(frame));
    }
    return quantize_to_storage(seq);
}

// Depth clip: far background with a body-sized blob whose "arm" region moves.
std::vector<std::vector<std::uint16_t>> make_depth_mm(Motion motion, std::size_t frames, std::size_t w, std::size_t h) {
    std::vector<std::vector<std::uint16_t>> clip;
    for (std::size_t t = 0; t < frames; ++t) {
        const double phase = 2.0 * M_PI * static_cast<double>(t) / static_cast<double>(frames);
        std::vector<std::uint16_t> px(w * h, 4600);  // beyond the far plane: black in the DMI
        auto rect = [&](long x0, long y0, long x1, long y1, std::uint16_t mm) {
            for (long y = std::max(0L, y0); y <= std::min<long>(h - 1, y1); ++y)
                for (long x = std::max(0L, x0); x <= std::min<long>(w - 1, x1); ++x) px[y * w + x] = mm;
        };
        rect(13, 6, 18, 20, 2500);  // torso and legs
        rect(14, 2, 17, 5, 2480);   // head
        switch (motion) {
            case Motion::Wave: {
                const long ax = 20 + std::lround(3 * std::sin(2 * phase));
                rect(ax, 1, ax + 1, 6, 2450);
                break;
            }
            case Motion::Drink: {
                const long ay = 12 - std::lround(7 * 0.5 * (1 - std::cos(phase)));
                rect(18, ay, 20, ay + 2, 2300);
                break;
            }
            case Motion::Kick: {
                const long fx = 18 + std::lround(6 * std::max(0.0, std::sin(phase)));
                rect(fx, 18, fx + 2, 20, 2200);
                break;
            }
        }
        if (t % 5 == 0) px[0] = 0;  // sensor dropout
        clip.push_back(std::move(px));
    }
    return clip;
}

void write_pgm16(const fs::path& path, const std::vector<std::uint16_t>& px, std::size_t w, std::size_t h) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << w << ' ' << h << "\n65535\n";
    for (auto v : px) {
        out.put(static_cast<char>(v >> 8));
        out.put(static_cast<char>(v & 0xFF));
    }
}

void write_pgm8(const fs::path& path, const DepthFrame& frame) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    write_pgm(out, frame);
}

ModelWeights make_model(std::size_t classes, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    auto rand_matrix = [&](std::size_t r, std::size_t c) {
        Matrix m(r, c);
        for (double& v : m.data()) v = static_cast<float>(u(rng));
        return m;
    };
    auto conv = [&](std::size_t in, std::size_t out, std::size_t scales) {
        GraphConvWeights w;
        w.in_channels = in;
        w.out_channels = out;
        for (std::size_t k = 0; k < scales; ++k) w.scale_weights.push_back(rand_matrix(in, out));
        for (std::size_t o = 0; o < out; ++o) w.bias.push_back(static_cast<float>(0.1 * u(rng)));
        return w;
    };
    ModelWeights m;
    m.layers.emplace_back(MsGcnLayer{conv(3, 8, 4)});
    m.layers.emplace_back(G3dLayer{3, conv(8, 8, 2)});
    m.head = ClassifierHead{8, classes, rand_matrix(8, classes)};
    return m;
}

std::string lines(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += s + '\n';
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <out_dir>\n";
        return 1;
    }
    const fs::path root = argv[1];
    fs::create_directories(root);

    write_text(root / "classes.txt", "# action classes; id = line order\n" + lines(kActions));

    {
        std::ostringstream reg;
        reg << "# TGR1 default registry: id<TAB>name<TAB>nine node tokens (row-major)\n";
        for (std::size_t i = 0; i < kActions.size(); ++i) reg << i << '\t' << kActions[i] << '\t' << kGlyphs[i] << '\n';
        write_text(root / "registry" / "default.tgr", reg.str());
        std::ostringstream t2;
        t2 << "# the seven labelled classes shown in the label table\n";
        for (std::size_t i = 0; i < kTableTwo.size(); ++i) t2 << i << '\t' << kTableTwo[i] << '\t' << kTableTwoGlyphs[i] << '\n';
        write_text(root / "registry" / "compact.tgr", t2.str());
    }

    {
        std::vector<std::string> names;
        for (const auto& row : kTrialRows) names.push_back(row.action);
        for (const char* extra : {"Touch neck", "Salute", "Head-shake"}) names.push_back(extra);
        write_text(root / "eval" / "trial_classes.txt", lines(names));
        std::ostringstream rec;
        rec << "# ten live trials per action: sequence_id<TAB>true<TAB>predicted\n";
        for (const auto& row : kTrialRows) {
            int n = 0;
            auto emit = [&](const std::string& predicted) {
                char id[64];
                std::snprintf(id, sizeof id, "trial_%02d", ++n);
                rec << row.action << '/' << id << '\t' << row.action << '\t' << predicted << '\n';
            };
            for (int i = 0; i < row.correct; ++i) emit(row.action);
            for (const auto& [cls, count] : row.confusions)
                for (int i = 0; i < count; ++i) emit(cls);
        }
        write_text(root / "eval" / "trial_records.tsv", rec.str());
    }

    {
        fs::create_directories(root / "model");
        const auto bytes = save_weights(make_model(kActions.size(), 20240601));
        std::ofstream bin(root / "model" / "toy.msw", std::ios::binary);
        bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }

    struct Clip {
        std::string id;
        Motion motion;
        std::size_t skel_frames;
        bool v1;
        std::size_t depth_frames;
        bool depth16;
        std::size_t class_id;
    };
    const std::vector<Clip> clips = {
        {"seq01_wave", Motion::Wave, 12, true, 6, false, 10},
        {"seq02_drink", Motion::Drink, 20, false, 8, true, 0},
        {"seq03_kick", Motion::Kick, 24, true, 7, false, 12},
    };
    constexpr std::size_t kW = 32, kH = 24;
    const DepthRange range;
    std::vector<std::vector<double>> anchor(kActions.size());
    for (std::size_t c = 0; c < clips.size(); ++c) {
        const auto& clip = clips[c];
        write_text(root / "skeleton" / (clip.id + ".skl"),
                   serialize_skeleton(make_sequence(clip.motion, clip.skel_frames, clip.v1, 7 + c)));

        const auto mm = make_depth_mm(clip.motion, clip.depth_frames, kW, kH);
        std::vector<DepthFrame> frames;
        for (std::size_t t = 0; t < mm.size(); ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%03zu.pgm", t);
            const auto path = root / "depth" / clip.id / name;
            DepthFrame f{kW, kH, {}};
            for (auto v : mm[t]) f.pixels.push_back(quantize_depth(v, range));
            if (clip.depth16) write_pgm16(path, mm[t], kW, kH);
            else write_pgm8(path, f);
            frames.push_back(std::move(f));
        }
        anchor[clip.class_id] = resize_nearest(depth_descriptor(DepthSequence::whole(frames), 0.0), 16);

        // an external depth stream leaning toward the clip's class
        ScoreVector ext;
        ext.class_names = kActions;
        ext.scores.assign(kActions.size(), 0.02);
        ext.scores[clip.class_id] = 1.0 - 0.02 * static_cast<double>(kActions.size() - 1);
        std::ostringstream s;
        write_scores(s, ext);
        write_text(root / "depth_scores" / (clip.id + ".scores"), s.str());
    }

    {
        CentroidSet set;
        set.side = 16;
        set.class_names = kActions;
        for (std::size_t c = 0; c < kActions.size(); ++c) {
            if (!anchor[c].empty()) {
                set.images.push_back(anchor[c]);
                continue;
            }
            // synthetic template: a vertical bar whose column depends on the class
            std::vector<double> img(16 * 16, 0.0);
            for (std::size_t y = 2; y < 14; ++y) img[y * 16 + (c % 14) + 1] = 1.0;
            set.images.push_back(std::move(img));
        }
        std::ostringstream s;
        write_centroids(s, set);
        write_text(root / "depth" / "centroids.txt", s.str());
    }

    {
        // two 2x2 frames for the DMI worked example
        write_pgm8(root / "dmi_two_frame" / "f0.pgm", DepthFrame{2, 2, {10, 200, 0, 30}});
        write_pgm8(root / "dmi_two_frame" / "f1.pgm", DepthFrame{2, 2, {50, 100, 20, 5}});
    }

    write_text(root / "config.json", R"({
  "model": "model/toy.msw",
  "registry": "registry/default.tgr",
  "classes": "classes.txt",
  "centroids": "depth/centroids.txt",
  "scales": 3,
  "window": 3,
  "alpha": 0.5,
  "fusion": "weighted",
  "temporal_length": 16,
  "depth_near_mm": 500,
  "depth_far_mm": 4500,
  "roi_threshold": 0,
  "temperature": 4
}
)");
    std::cout << "fixtures written to " << root << '\n';
    return 0;
}
