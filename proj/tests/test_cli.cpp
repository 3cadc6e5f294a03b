#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "actsem/depth.hpp"
#include "actsem/fusion.hpp"
#include "actsem/matrix.hpp"
#include "actsem/tactile.hpp"

using namespace actsem;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = ACTSEM_FIXTURE_DIR;
const std::string kCli = ACTSEM_CLI;

struct CliResult {
    int status = -1;
    std::string out;
};

CliResult cli(const std::string& args) {
    const std::string cmd = "'" + kCli + "' " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("actsem_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_F(CliTest, KhopZeroIsIdentityDump) {
    const auto r = cli("graph khop --k 0");
    ASSERT_EQ(r.status, 0);
    std::istringstream in(r.out);
    EXPECT_EQ(read_matrix_dump(in), Matrix::identity(25));
}

TEST_F(CliTest, DmiComputeTwoFrameFixture) {
    const auto r = cli("dmi compute " + q(kFixtures + "/dmi_two_frame") + " --format tsv");
    ASSERT_EQ(r.status, 0);
    std::istringstream in(r.out);
    const auto img = read_dmi_text(in);
    // 255 minus the per-pixel minimum of [[10,200],[0,30]] and [[50,100],[20,5]]
    EXPECT_EQ(img.values, (std::vector<double>{255 - 10, 255 - 100, 255 - 0, 255 - 5}));
}

TEST_F(CliTest, EvalTallyRows) {
    const auto r = cli("eval tally " + q(kFixtures + "/eval/trial_records.tsv") + " --classes " +
                       q(kFixtures + "/eval/trial_classes.txt"));
    ASSERT_EQ(r.status, 0);
    bool drink = false, clapping = false;
    for (const auto& line : split_lines(r.out)) {
        if (line.rfind("Drink ", 0) == 0) drink = line.find("10/10") != std::string::npos;
        if (line.rfind("Clapping ", 0) == 0) clapping = line.find("2/10") != std::string::npos;
    }
    EXPECT_TRUE(drink) << r.out;
    EXPECT_TRUE(clapping) << r.out;
}

TEST_F(CliTest, MissingModelExitsWithInputError) {
    const auto r = cli("run --config " + q(kFixtures + "/config.json") + " --skeleton " + q(kFixtures + "/skeleton") +
                       " --model " + q(tmp("none.msw")));
    EXPECT_EQ(r.status, 1);
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, BadFlagExitsWithInputError) { EXPECT_EQ(cli("graph khop --k").status, 1); }

TEST_F(CliTest, InvalidGlyphExitsTwo) {
    EXPECT_EQ(cli("glyph validate \"00 00 00 00 11 00 00 00 00\"").status, 2);
    EXPECT_EQ(cli("glyph validate \"00 F 00 00 11 00 00 00 00\"").status, 0);
}

TEST_F(CliTest, GlyphEncodeDecodeRoundTrip) {
    const auto enc = cli("glyph encode \"00 F 00 00 15 81 00 29 00\"");
    ASSERT_EQ(enc.status, 0);
    const std::string hex = split_lines(enc.out).at(0);
    const auto dec = cli("glyph decode " + hex);
    ASSERT_EQ(dec.status, 0);
    EXPECT_EQ(split_lines(dec.out).at(0), "00 F 00 00 15 81 00 29 00");
}

TEST_F(CliTest, StageChainReproducesRun) {
    const std::string cfg = q(kFixtures + "/config.json");
    const auto run = cli("run --config " + cfg + " --skeleton " + q(kFixtures + "/skeleton") + " --depth " +
                         q(kFixtures + "/depth"));
    ASSERT_EQ(run.status, 0);
    const auto records = split_lines(run.out);
    ASSERT_EQ(records.size(), 3u);

    for (const auto& record : records) {
        const std::string id = record.substr(0, record.find('\t'));
        const std::string pre = tmp(id + ".pre.skl"), skel = tmp(id + ".skel.scores"), raw = tmp(id + ".raw.pgm"),
                          norm = tmp(id + ".norm.txt"), crop = tmp(id + ".crop.txt"),
                          depth = tmp(id + ".depth.scores"), fused = tmp(id + ".fused.scores");
        ASSERT_EQ(cli("skel preprocess --config " + cfg + " " + q(kFixtures + "/skeleton/" + id + ".skl") + " -o " + q(pre)).status, 0);
        ASSERT_EQ(cli("model infer --config " + cfg + " " + q(pre) + " -o " + q(skel)).status, 0);
        ASSERT_EQ(cli("dmi compute --config " + cfg + " " + q(kFixtures + "/depth/" + id) + " -o " + q(raw)).status, 0);
        ASSERT_EQ(cli("dmi normalize --config " + cfg + " " + q(raw) + " -o " + q(norm)).status, 0);
        ASSERT_EQ(cli("dmi crop --config " + cfg + " " + q(norm) + " -o " + q(crop)).status, 0);
        ASSERT_EQ(cli("dmi classify --config " + cfg + " " + q(crop) + " -o " + q(depth)).status, 0);
        ASSERT_EQ(cli("fuse --config " + cfg + " --skeleton " + q(skel) + " --depth " + q(depth) + " -o " + q(fused)).status, 0);
        const auto enc = cli("glyph encode --config " + cfg + " --scores " + q(fused));
        ASSERT_EQ(enc.status, 0);

        const auto scores = load_scores_file(fused);
        const std::size_t cls = top_prediction(scores);
        char score[64];
        std::snprintf(score, sizeof score, "%.9g", scores.scores[cls]);
        const std::string rebuilt = id + "\t" + std::to_string(cls) + "\t" + scores.class_names[cls] + "\t" + score +
                                    "\t" + split_lines(enc.out).at(0);
        EXPECT_EQ(rebuilt, record);
    }
}

TEST_F(CliTest, RunIsDeterministicAcrossJobs) {
    const std::string base = "run --config " + q(kFixtures + "/config.json") + " --skeleton " +
                             q(kFixtures + "/skeleton") + " --depth " + q(kFixtures + "/depth");
    const auto a = cli(base);
    const auto b = cli(base + " --jobs 3");
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, SkeletonOnlyRunMatchesInfer) {
    const std::string cfg = q(kFixtures + "/config.json");
    const std::string id = "seq03_kick";
    const auto run = cli("run --config " + cfg + " --skeleton " + q(kFixtures + "/skeleton/" + id + ".skl"));
    ASSERT_EQ(run.status, 0);
    const std::string pre = tmp("pre.skl"), skel = tmp("skel.scores");
    ASSERT_EQ(cli("skel preprocess --config " + cfg + " " + q(kFixtures + "/skeleton/" + id + ".skl") + " -o " + q(pre)).status, 0);
    ASSERT_EQ(cli("model infer --config " + cfg + " " + q(pre) + " -o " + q(skel)).status, 0);
    const auto scores = load_scores_file(skel);
    const auto fields = split_lines(run.out).at(0);
    EXPECT_EQ(fields.substr(id.size() + 1, fields.find('\t', id.size() + 1) - id.size() - 1),
              std::to_string(top_prediction(scores)));
}
