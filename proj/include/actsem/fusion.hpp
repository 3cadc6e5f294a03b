#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "actsem/gcn.hpp"

namespace actsem {

enum class FusionRule {
    Weighted,  // alpha * skel + (1 - alpha) * depth
    Product,   // skel^alpha * depth^(1-alpha), renormalized
};

struct FusionConfig {
    double alpha = 0.5;
    FusionRule rule = FusionRule::Weighted;
};

ScoreVector fuse_scores(const ScoreVector& skel, const ScoreVector& depth, const FusionConfig& cfg);

/// Index of the largest score; ties go to the lowest index.
std::size_t top_prediction(const ScoreVector& s);

/// Ordered class names; a class id is its position in the list.
class ClassList {
public:
    ClassList() = default;
    explicit ClassList(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t id) const;
    /// Resolves a class by exact name, or by decimal id when no name matches.
    std::size_t resolve(const std::string& token) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
};

/// One name per line; blank lines and '#' comments are skipped.
ClassList read_class_list(std::istream& in);
ClassList load_class_list_file(const std::string& path);

struct PredictionRecord {
    std::string sequence_id;
    std::size_t true_class = 0;
    std::size_t predicted_class = 0;
};

/// `sequence_id<TAB>true_class<TAB>predicted_class`; classes by name or id.
std::vector<PredictionRecord> read_records(std::istream& in, const ClassList& classes);
void write_records(std::ostream& out, const std::vector<PredictionRecord>& records, const ClassList& classes);

struct ActionScoreRow {
    std::size_t class_id = 0;
    std::size_t trials = 0;
    std::size_t correct = 0;
    std::map<std::size_t, std::size_t> confusions;  // predicted class -> count

    friend bool operator==(const ActionScoreRow&, const ActionScoreRow&) = default;
};

/// Rows for every class with at least one trial, in class-id order.
struct ActionScoreTable {
    std::vector<ActionScoreRow> rows;

    const ActionScoreRow* find(std::size_t class_id) const;
};

ActionScoreTable trial_tally(const std::vector<PredictionRecord>& records, const ClassList& classes);
Matrix confusion_matrix(const std::vector<PredictionRecord>& records, const ClassList& classes);

/// "correct/trials", e.g. "10/10".
std::string score_text(const ActionScoreRow& row);
/// Aligned three-column table: Action, Score, Confused with. A row with
/// several confusions continues on indented lines.
std::string render_table(const ActionScoreTable& table, const ClassList& classes);
std::string render_confusion(const Matrix& m, const ClassList& classes);

/// Score file: one `class_id<TAB>class_name<TAB>score` line per class.
void write_scores(std::ostream& out, const ScoreVector& s);
ScoreVector read_scores(std::istream& in);
ScoreVector load_scores_file(const std::string& path);

}  // namespace actsem
