#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "actsem/fusion.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace actsem;

namespace {

const std::string kFixtures = ACTSEM_FIXTURE_DIR;

ScoreVector scores(std::vector<double> v) {
    ScoreVector s;
    s.scores = std::move(v);
    return s;
}

ScoreVector random_distribution(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) sum += (x = u(rng) + 1e-3);
    for (double& x : v) x /= sum;
    return scores(v);
}

ClassList letters(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    return ClassList(names);
}

struct TrialFixture {
    ClassList classes;
    std::vector<PredictionRecord> records;
};

TrialFixture load_trials() {
    TrialFixture f;
    f.classes = load_class_list_file(kFixtures + "/eval/trial_classes.txt");
    std::ifstream in(kFixtures + "/eval/trial_records.tsv");
    f.records = read_records(in, f.classes);
    return f;
}

std::set<std::string> confusion_names(const ActionScoreRow& row, const ClassList& classes) {
    std::set<std::string> out;
    for (const auto& [id, count] : row.confusions) out.insert(classes.name(id));
    return out;
}

}  // namespace

// ---- fuse -------------------------------------------------------------------

TEST(Fuse, EqualInputsStayPut) {
    std::mt19937 rng(61);
    const auto s = random_distribution(rng, 5);
    for (double alpha : {0.0, 0.3, 0.5, 1.0}) {
        const auto f = fuse_scores(s, s, {alpha, FusionRule::Weighted});
        for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(f.scores[i], s.scores[i], 1e-15);
    }
}

TEST(Fuse, BoundaryWeightsAreExact) {
    std::mt19937 rng(62);
    const auto a = random_distribution(rng, 4), b = random_distribution(rng, 4);
    EXPECT_EQ(fuse_scores(a, b, {1.0, FusionRule::Weighted}).scores, a.scores);
    EXPECT_EQ(fuse_scores(a, b, {0.0, FusionRule::Weighted}).scores, b.scores);
}

TEST(Fuse, HalfAndHalfExample) {
    const auto f = fuse_scores(scores({0.7, 0.3}), scores({0.2, 0.8}), {0.5, FusionRule::Weighted});
    EXPECT_NEAR(f.scores[0], 0.5 * 0.7 + 0.5 * 0.2, 1e-15);
    EXPECT_NEAR(f.scores[1], 0.5 * 0.3 + 0.5 * 0.8, 1e-15);
    EXPECT_NEAR(f.scores[0], 0.45, 1e-15);
    EXPECT_EQ(top_prediction(scores({0.7, 0.3})), 0u);
    EXPECT_EQ(top_prediction(f), 1u);
}

TEST(Fuse, DistributionAndAffineInAlpha) {
    std::mt19937 rng(63);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_distribution(rng, 6), b = random_distribution(rng, 6);
        const double alpha = u(rng);
        const auto f = fuse_scores(a, b, {alpha, FusionRule::Weighted});
        EXPECT_NEAR(std::accumulate(f.scores.begin(), f.scores.end(), 0.0), 1.0, 1e-6);
        for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(f.scores[i], alpha * a.scores[i] + (1 - alpha) * b.scores[i], 1e-15);
    }
}

TEST(Fuse, ProductRuleRenormalizes) {
    const auto f = fuse_scores(scores({0.5, 0.5}), scores({0.2, 0.8}), {0.5, FusionRule::Product});
    const double a = std::sqrt(0.5 * 0.2), b = std::sqrt(0.5 * 0.8);
    EXPECT_NEAR(f.scores[0], a / (a + b), 1e-12);
    EXPECT_NEAR(f.scores[1], b / (a + b), 1e-12);
}

TEST(Fuse, ClassListMismatch) {
    EXPECT_ERROR_CODE(fuse_scores(scores({1.0}), scores({0.5, 0.5}), {}), ErrorCode::ClassListMismatch);
    ScoreVector a{{0.5, 0.5}, {"x", "y"}}, b{{0.5, 0.5}, {"y", "x"}};
    EXPECT_ERROR_CODE(fuse_scores(a, b, {}), ErrorCode::ClassListMismatch);
}

// ---- top prediction ---------------------------------------------------------

TEST(Top, UniqueMaxAndTies) {
    EXPECT_EQ(top_prediction(scores({0.1, 0.8, 0.1})), 1u);
    EXPECT_EQ(top_prediction(scores({0.5, 0.5})), 0u);
    EXPECT_ERROR_CODE(top_prediction(scores({})), ErrorCode::EmptyScores);
}

TEST(Top, AgreesWithScanAndScaleInvariant) {
    std::mt19937 rng(64);
    std::uniform_int_distribution<int> coarse(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + trial % 7);
        for (double& x : v) x = coarse(rng) / 4.0;  // frequent ties
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[best]) best = i;
        EXPECT_EQ(top_prediction(scores(v)), best);
        for (double& x : v) x *= 3.0;
        EXPECT_EQ(top_prediction(scores(v)), best);
    }
}

// ---- tally ------------------------------------------------------------------

TEST(Tally, DrinkRow) {
    const auto f = load_trials();
    const auto table = trial_tally(f.records, f.classes);
    const auto* drink = table.find(f.classes.resolve("Drink"));
    ASSERT_NE(drink, nullptr);
    EXPECT_EQ(score_text(*drink), "10/10");
    EXPECT_TRUE(drink->confusions.empty());
}

TEST(Tally, ClappingRow) {
    const auto f = load_trials();
    const auto table = trial_tally(f.records, f.classes);
    const auto* clapping = table.find(f.classes.resolve("Clapping"));
    ASSERT_NE(clapping, nullptr);
    EXPECT_EQ(score_text(*clapping), "2/10");
    EXPECT_EQ(confusion_names(*clapping, f.classes),
              (std::set<std::string>{"Writing", "Reading", "Playing with/using phone"}));
}

TEST(Tally, AllTableRowsScores) {
    // Action, score, confused-with set of the trial fixture.
    const std::vector<std::tuple<std::string, std::string, std::set<std::string>>> rows{
        {"Drink", "10/10", {}},
        {"Brush teeth", "6/10", {"Phone call"}},
        {"Brush hair", "8/10", {"Touch neck", "Phone call"}},
        {"Eat meal/snacks", "10/10", {}},
        {"Throw", "7/10", {"Salute"}},
        {"Sit down", "5/10", {"Take off/put on shoes"}},
        {"Stand up", "8/10", {"Head-shake"}},
        {"Jump up", "9/10", {"Stand up"}},
        {"Clapping", "2/10", {"Writing", "Reading", "Playing with/using phone"}},
        {"Hand waving", "6/10", {"Fan self"}},
        {"Playing with/using phone", "8/10", {"Writing"}},
        {"Phone call", "8/10", {"Brush teeth"}},
        {"Kicking something", "10/10", {}},
        {"Falling", "5/10", {"Take off/put on shoes"}},
        {"Fan self", "10/10", {}},
        {"Writing", "5/10", {"Reading", "Playing with/using phone"}},
        {"Reading", "6/10", {"Writing", "Playing with/using phone"}},
        {"Take off/put on shoes", "10/10", {}},
    };
    const auto f = load_trials();
    const auto table = trial_tally(f.records, f.classes);
    EXPECT_EQ(table.rows.size(), rows.size());
    for (const auto& [name, score, confused] : rows) {
        const auto* row = table.find(f.classes.resolve(name));
        ASSERT_NE(row, nullptr) << name;
        EXPECT_EQ(score_text(*row), score) << name;
        EXPECT_EQ(confusion_names(*row, f.classes), confused) << name;
    }
}

TEST(Tally, RandomRecordsMatchCountingLoop) {
    std::mt19937 rng(65);
    const auto classes = letters(5);
    std::uniform_int_distribution<std::size_t> pick(0, 4);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<PredictionRecord> records;
        for (int i = 0; i < 40; ++i) records.push_back({"s" + std::to_string(i), pick(rng), pick(rng)});
        std::map<std::size_t, std::size_t> trials, correct;
        std::map<std::size_t, std::map<std::size_t, std::size_t>> wrong;
        for (const auto& r : records) {
            ++trials[r.true_class];
            if (r.true_class == r.predicted_class)
                ++correct[r.true_class];
            else
                ++wrong[r.true_class][r.predicted_class];
        }
        const auto table = trial_tally(records, classes);
        EXPECT_EQ(table.rows.size(), trials.size());
        const Matrix cm = confusion_matrix(records, classes);
        for (const auto& row : table.rows) {
            EXPECT_EQ(row.trials, trials[row.class_id]);
            EXPECT_EQ(row.correct, correct[row.class_id]);
            EXPECT_EQ(row.confusions, wrong[row.class_id]);
            std::size_t confused = 0;
            for (const auto& [id, n] : row.confusions) confused += n;
            EXPECT_EQ(confused, row.trials - row.correct);
            // Cross-consistency with the dense matrix.
            EXPECT_EQ(cm(row.class_id, row.class_id), static_cast<double>(row.correct));
            double row_sum = 0.0;
            for (std::size_t j = 0; j < 5; ++j) {
                row_sum += cm(row.class_id, j);
                if (j != row.class_id) {
                    const auto it = row.confusions.find(j);
                    EXPECT_EQ(cm(row.class_id, j), it == row.confusions.end() ? 0.0 : static_cast<double>(it->second));
                }
            }
            EXPECT_EQ(row_sum, static_cast<double>(row.trials));
        }
    }
}

TEST(Tally, AllCorrectGivesDiagonalMatrix) {
    const auto classes = letters(3);
    const std::vector<PredictionRecord> records{{"a", 0, 0}, {"b", 1, 1}, {"c", 1, 1}, {"d", 2, 2}};
    const Matrix cm = confusion_matrix(records, classes);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) EXPECT_EQ(cm(i, j), 0.0);
    EXPECT_EQ(cm(1, 1), 2.0);
}

TEST(Tally, UnknownClass) {
    const auto classes = letters(2);
    EXPECT_ERROR_CODE(trial_tally({{"x", 0, 5}}, classes), ErrorCode::UnknownClass);
    EXPECT_ERROR_CODE(confusion_matrix({{"x", 3, 0}}, classes), ErrorCode::UnknownClass);
    std::istringstream in("s1\tA\tZebra\n");
    EXPECT_ERROR_CODE(read_records(in, classes), ErrorCode::UnknownClass);
}

TEST(Tally, RenderedTableLayout) {
    const auto f = load_trials();
    const std::string text = render_table(trial_tally(f.records, f.classes), f.classes);
    std::istringstream lines(text);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    EXPECT_EQ(header.rfind("Action", 0), 0u);
    EXPECT_NE(header.find("Score"), std::string::npos);
    EXPECT_NE(header.find("Confused with"), std::string::npos);
    EXPECT_EQ(first.rfind("Drink", 0), 0u);
    EXPECT_NE(first.find("10/10"), std::string::npos);
    EXPECT_NE(text.find("2/10"), std::string::npos);
}

// ---- files ------------------------------------------------------------------

TEST(Records, RoundTrip) {
    const auto f = load_trials();
    std::stringstream ss;
    write_records(ss, f.records, f.classes);
    const auto again = read_records(ss, f.classes);
    ASSERT_EQ(again.size(), f.records.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        EXPECT_EQ(again[i].sequence_id, f.records[i].sequence_id);
        EXPECT_EQ(again[i].true_class, f.records[i].true_class);
        EXPECT_EQ(again[i].predicted_class, f.records[i].predicted_class);
    }
}

TEST(Records, Malformed) {
    const auto classes = letters(2);
    std::istringstream in("only\ttwo\n");
    EXPECT_ERROR_CODE(read_records(in, classes), ErrorCode::MalformedRecord);
}

TEST(Scores, ExactRoundTrip) {
    std::mt19937 rng(66);
    auto s = random_distribution(rng, 4);
    s.class_names = {"a", "b c", "d", "e"};
    std::stringstream ss;
    write_scores(ss, s);
    EXPECT_EQ(read_scores(ss), s);
}

TEST(ClassListTest, ResolveAndDuplicates) {
    const auto classes = letters(3);
    EXPECT_EQ(classes.resolve("B"), 1u);
    EXPECT_EQ(classes.resolve("2"), 2u);
    EXPECT_ERROR_CODE(classes.resolve("7"), ErrorCode::UnknownClass);
    EXPECT_ERROR_CODE(ClassList({"x", "x"}), ErrorCode::DuplicateClassId);
}
