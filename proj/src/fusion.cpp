#include "actsem/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "actsem/error.hpp"
#include "actsem/matrix.hpp"

namespace actsem {

ScoreVector fuse_scores(const ScoreVector& skel, const ScoreVector& depth, const FusionConfig& cfg) {
    if (skel.size() != depth.size())
        throw Error(ErrorCode::ClassListMismatch, std::to_string(skel.size()) + " vs " + std::to_string(depth.size()) +
                                                      " classes");
    if (!skel.class_names.empty() && !depth.class_names.empty() && skel.class_names != depth.class_names)
        throw Error(ErrorCode::ClassListMismatch, "class names or order differ between streams");
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0,1]");

    ScoreVector out;
    out.class_names = skel.class_names.empty() ? depth.class_names : skel.class_names;
    out.scores.resize(skel.size());
    if (cfg.rule == FusionRule::Weighted) {
        if (cfg.alpha == 1.0) return ScoreVector{skel.scores, out.class_names};
        if (cfg.alpha == 0.0) return ScoreVector{depth.scores, out.class_names};
        for (std::size_t i = 0; i < skel.size(); ++i)
            out.scores[i] = cfg.alpha * skel.scores[i] + (1.0 - cfg.alpha) * depth.scores[i];
        return out;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < skel.size(); ++i) {
        out.scores[i] = std::pow(skel.scores[i], cfg.alpha) * std::pow(depth.scores[i], 1.0 - cfg.alpha);
        sum += out.scores[i];
    }
    if (sum <= 0.0) throw Error(ErrorCode::InvalidArgument, "product fusion of disjoint distributions");
    for (double& v : out.scores) v /= sum;
    return out;
}

std::size_t top_prediction(const ScoreVector& s) {
    if (s.scores.empty()) throw Error(ErrorCode::EmptyScores, "no scores");
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.scores.size(); ++i)
        if (s.scores[i] > s.scores[best]) best = i;
    return best;
}

ClassList::ClassList(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (!index_.emplace(names_[i], i).second) throw Error(ErrorCode::DuplicateClassId, "class '" + names_[i] + "' listed twice");
}

const std::string& ClassList::name(std::size_t id) const {
    if (id >= names_.size()) throw Error(ErrorCode::UnknownClass, "class id " + std::to_string(id));
    return names_[id];
}

std::size_t ClassList::resolve(const std::string& token) const {
    if (auto it = index_.find(token); it != index_.end()) return it->second;
    if (!token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
        token.size() < 10) {
        const std::size_t id = std::stoul(token);
        if (id < names_.size()) return id;
    }
    throw Error(ErrorCode::UnknownClass, "'" + token + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto tab = line.find('\t', start);
        out.push_back(trim(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start)));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return out;
}

bool skippable(const std::string& line) {
    const auto t = trim(line);
    return t.empty() || t[0] == '#';
}

}  // namespace

ClassList read_class_list(std::istream& in) {
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line))
        if (!skippable(line)) names.push_back(trim(line));
    return ClassList(std::move(names));
}

ClassList load_class_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open class list " + path);
    return read_class_list(in);
}

std::vector<PredictionRecord> read_records(std::istream& in, const ClassList& classes) {
    std::vector<PredictionRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
        try {
            records.push_back({fields[0], classes.resolve(fields[1]), classes.resolve(fields[2])});
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

void write_records(std::ostream& out, const std::vector<PredictionRecord>& records, const ClassList& classes) {
    for (const auto& r : records)
        out << r.sequence_id << '\t' << classes.name(r.true_class) << '\t' << classes.name(r.predicted_class) << '\n';
}

const ActionScoreRow* ActionScoreTable::find(std::size_t class_id) const {
    for (const auto& row : rows)
        if (row.class_id == class_id) return &row;
    return nullptr;
}

namespace {

void check_classes(const PredictionRecord& r, const ClassList& classes) {
    if (r.true_class >= classes.size() || r.predicted_class >= classes.size())
        throw Error(ErrorCode::UnknownClass, "record '" + r.sequence_id + "' references a class outside the list of " +
                                                 std::to_string(classes.size()));
}

}  // namespace

ActionScoreTable trial_tally(const std::vector<PredictionRecord>& records, const ClassList& classes) {
    std::vector<ActionScoreRow> rows(classes.size());
    for (std::size_t c = 0; c < rows.size(); ++c) rows[c].class_id = c;
    for (const auto& r : records) {
        check_classes(r, classes);
        auto& row = rows[r.true_class];
        ++row.trials;
        if (r.predicted_class == r.true_class) ++row.correct;
        else ++row.confusions[r.predicted_class];
    }
    ActionScoreTable table;
    for (auto& row : rows)
        if (row.trials > 0) table.rows.push_back(std::move(row));
    return table;
}

Matrix confusion_matrix(const std::vector<PredictionRecord>& records, const ClassList& classes) {
    Matrix m(classes.size(), classes.size());
    for (const auto& r : records) {
        check_classes(r, classes);
        m(r.true_class, r.predicted_class) += 1.0;
    }
    return m;
}

std::string score_text(const ActionScoreRow& row) {
    return std::to_string(row.correct) + "/" + std::to_string(row.trials);
}

std::string render_table(const ActionScoreTable& table, const ClassList& classes) {
    std::size_t action_w = std::string("Action").size();
    std::size_t score_w = std::string("Score").size();
    for (const auto& row : table.rows) {
        action_w = std::max(action_w, classes.name(row.class_id).size());
        score_w = std::max(score_w, score_text(row).size());
    }
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };
    std::ostringstream out;
    auto emit = [&](const std::string& a, const std::string& b, const std::string& c) {
        std::string line = pad(a, action_w) + "  " + pad(b, score_w) + "  " + c;
        line.erase(line.find_last_not_of(' ') + 1);
        out << line << '\n';
    };
    emit("Action", "Score", "Confused with");
    for (const auto& row : table.rows) {
        if (row.confusions.empty()) {
            emit(classes.name(row.class_id), score_text(row), "");
            continue;
        }
        bool first = true;
        for (const auto& [cls, count] : row.confusions) {
            const std::string what = classes.name(cls) + " (" + std::to_string(count) + ")";
            emit(first ? classes.name(row.class_id) : "", first ? score_text(row) : "", what);
            first = false;
        }
    }
    return out.str();
}

std::string render_confusion(const Matrix& m, const ClassList& classes) {
    std::ostringstream out;
    out << "true\\pred";
    for (std::size_t j = 0; j < m.cols(); ++j) out << '\t' << j;
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << i;
        for (std::size_t j = 0; j < m.cols(); ++j) out << '\t' << static_cast<long long>(m(i, j));
        out << '\t' << classes.name(i) << '\n';
    }
    return out.str();
}

void write_scores(std::ostream& out, const ScoreVector& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        out << i << '\t' << (i < s.class_names.size() ? s.class_names[i] : std::string()) << '\t'
            << format_exact(s.scores[i]) << '\n';
}

ScoreVector read_scores(std::istream& in) {
    ScoreVector s;
    std::string line;
    std::size_t line_no = 0;
    bool named = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3 || fields[0] != std::to_string(s.scores.size()))
            throw Error(ErrorCode::MalformedRecord, "score line " + std::to_string(line_no) +
                                                        ": expected '<id>\\t<name>\\t<score>' with consecutive ids");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(fields[2], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != fields[2].size() || !std::isfinite(v) || v < 0.0)
            throw Error(ErrorCode::MalformedRecord, "score line " + std::to_string(line_no) + ": bad score");
        s.scores.push_back(v);
        s.class_names.push_back(fields[1]);
        named = named && !fields[1].empty();
    }
    if (s.scores.empty()) throw Error(ErrorCode::EmptyScores, "score file has no entries");
    if (!named) s.class_names.clear();
    return s;
}

ScoreVector load_scores_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open scores " + path);
    return read_scores(in);
}

}  // namespace actsem
