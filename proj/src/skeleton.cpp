#include "actsem/skeleton.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "actsem/error.hpp"
#include "actsem/matrix.hpp"

namespace actsem {

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

double distance(const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
}

JointId::JointId(int number) : number_(number) {
    if (number < 1 || number > static_cast<int>(kV2JointCount))
        throw Error(ErrorCode::InvalidJointId, "joint " + std::to_string(number) + " outside 1..25");
}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no); }

}  // namespace

SkeletonSequence parse_skeleton(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_content_line(in, line, line_no)) throw Error(ErrorCode::MalformedHeader, "empty input");

    std::istringstream header(line);
    std::string magic;
    long long version = 0, num_frames = 0, num_joints = 0;
    if (!(header >> magic >> version >> num_frames >> num_joints) || magic != "skl")
        throw Error(ErrorCode::MalformedHeader, where(line_no) + ": expected 'skl <version> <frames> <joints> <rate>'");
    if (version != 1) throw Error(ErrorCode::MalformedHeader, "unsupported SKL version " + std::to_string(version));
    if (num_frames <= 0) throw Error(ErrorCode::MalformedHeader, "sequence declares no frames");
    if (num_joints != 20 && num_joints != 25)
        throw Error(ErrorCode::UnsupportedJointCount, std::to_string(num_joints) + " joints");

    SkeletonSequence seq;
    double rate = 30.0;
    if (header >> rate) {
        if (!std::isfinite(rate) || rate <= 0.0) throw Error(ErrorCode::MalformedHeader, "frame rate must be positive");
        seq.frame_rate_hz = rate;
    } else if (!header.eof()) {
        throw Error(ErrorCode::MalformedHeader, where(line_no) + ": bad frame rate");
    } else {
        header.clear();
    }
    std::string extra;
    if (header >> extra) throw Error(ErrorCode::MalformedHeader, where(line_no) + ": trailing tokens");

    const auto joints = static_cast<std::size_t>(num_joints);
    seq.frames.reserve(static_cast<std::size_t>(num_frames));
    for (long long f = 0; f < num_frames; ++f) {
        SkeletonFrame frame;
        frame.joints.reserve(joints);
        frame.valid.reserve(joints);
        for (std::size_t j = 0; j < joints; ++j) {
            if (!next_content_line(in, line, line_no))
                throw Error(ErrorCode::FrameCountMismatch, "header declares " + std::to_string(num_frames) +
                                                               " frames, input ends in frame " + std::to_string(f));
            std::istringstream row(line);
            std::string tok[4];
            int n = 0;
            while (n < 4 && row >> tok[n]) ++n;
            std::string more;
            if (n < 3 || (row >> more)) throw Error(ErrorCode::MalformedLine, where(line_no) + ": expected 'x y z [v]'");
            Vec3 p;
            double* dst[3] = {&p.x, &p.y, &p.z};
            for (int k = 0; k < 3; ++k) {
                std::size_t used = 0;
                try {
                    *dst[k] = std::stod(tok[k], &used);
                } catch (const std::out_of_range&) {
                    throw Error(ErrorCode::NonFiniteCoordinate, where(line_no) + ": '" + tok[k] + "'");
                } catch (const std::invalid_argument&) {
                    throw Error(ErrorCode::MalformedLine, where(line_no) + ": '" + tok[k] + "' is not a number");
                }
                if (used != tok[k].size())
                    throw Error(ErrorCode::MalformedLine, where(line_no) + ": '" + tok[k] + "' is not a number");
                if (!std::isfinite(*dst[k])) throw Error(ErrorCode::NonFiniteCoordinate, where(line_no) + ": '" + tok[k] + "'");
            }
            bool valid = true;
            if (n == 4) {
                if (tok[3] == "0") valid = false;
                else if (tok[3] != "1") throw Error(ErrorCode::MalformedLine, where(line_no) + ": validity flag must be 0 or 1");
            }
            frame.joints.push_back(p);
            frame.valid.push_back(valid);
        }
        seq.frames.push_back(std::move(frame));
    }
    if (next_content_line(in, line, line_no))
        throw Error(ErrorCode::FrameCountMismatch, where(line_no) + ": data beyond the declared " +
                                                       std::to_string(num_frames) + " frames");
    return seq;
}

SkeletonSequence parse_skeleton_string(const std::string& text) {
    std::istringstream in(text);
    return parse_skeleton(in);
}

SkeletonSequence load_skeleton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return parse_skeleton(in);
}

void write_skeleton(std::ostream& out, const SkeletonSequence& seq) {
    out << "skl 1 " << seq.frames.size() << ' ' << seq.joint_count() << ' ' << format_9g(seq.frame_rate_hz) << '\n';
    for (const auto& frame : seq.frames) {
        for (std::size_t j = 0; j < frame.joints.size(); ++j) {
            const Vec3& p = frame.joints[j];
            out << format_9g(p.x) << ' ' << format_9g(p.y) << ' ' << format_9g(p.z);
            if (!frame.valid[j]) out << " 0";
            out << '\n';
        }
    }
}

std::string serialize_skeleton(const SkeletonSequence& seq) {
    std::ostringstream out;
    write_skeleton(out, seq);
    return out.str();
}

SkeletonFrame remap_v1_to_v2(const SkeletonFrame& frame) {
    if (frame.joints.size() != kV1JointCount || frame.valid.size() != kV1JointCount)
        throw Error(ErrorCode::WrongJointCount,
                    "remap expects 20 joints, got " + std::to_string(frame.joints.size()));
    SkeletonFrame out;
    out.joints = frame.joints;
    out.valid = frame.valid;
    out.joints.resize(kV2JointCount);
    out.valid.resize(kV2JointCount, false);
    for (const auto& [target, source] : kFillInTable) out.joints[target - 1] = frame.joints[source - 1];
    return out;
}

SkeletonSequence remap_sequence(const SkeletonSequence& seq) {
    if (seq.joint_count() == kV2JointCount) return seq;
    SkeletonSequence out = seq;
    for (auto& frame : out.frames) frame = remap_v1_to_v2(frame);
    return out;
}

SkeletonSequence center_translate(const SkeletonSequence& seq, JointId ref) {
    if (seq.frames.empty()) throw Error(ErrorCode::EmptySequence, "center_translate");
    if (ref.v2_only()) throw Error(ErrorCode::InvalidJointId, "reference joint must be one of 1..20");
    const Vec3 origin = seq.frames.front().at(ref);
    SkeletonSequence out = seq;
    for (auto& frame : out.frames)
        for (auto& p : frame.joints) p = p - origin;
    return out;
}

SkeletonSequence normalize_scale(const SkeletonSequence& seq) {
    if (seq.frames.empty()) throw Error(ErrorCode::EmptySequence, "normalize_scale");
    const auto& first = seq.frames.front();
    const double len = distance(first.at(JointId(kScaleBoneFrom)), first.at(JointId(kScaleBoneTo)));
    if (!(len >= kMinBoneLength))
        throw Error(ErrorCode::DegenerateBone, "reference bone length " + format_9g(len) + " m");
    SkeletonSequence out = seq;
    for (auto& frame : out.frames)
        for (auto& p : frame.joints) p = {p.x / len, p.y / len, p.z / len};
    return out;
}

std::vector<std::size_t> resample_indices(std::size_t source_len, std::size_t target_len) {
    if (source_len == 0) throw Error(ErrorCode::EmptySequence, "resample_temporal");
    if (target_len == 0) throw Error(ErrorCode::ZeroTargetLength, "resample_temporal");
    std::vector<std::size_t> idx(target_len);
    for (std::size_t i = 0; i < target_len; ++i) {
        if (source_len <= target_len) {
            idx[i] = i % source_len;
        } else {
            // round(i * n / T), half away from zero, in exact integer arithmetic
            const std::size_t r = (2 * i * source_len + target_len) / (2 * target_len);
            idx[i] = std::min(r, source_len - 1);
        }
    }
    return idx;
}

SkeletonSequence resample_temporal(const SkeletonSequence& seq, std::size_t target_len) {
    const auto idx = resample_indices(seq.frames.size(), target_len);
    SkeletonSequence out = seq;
    out.frames.clear();
    out.frames.reserve(target_len);
    for (std::size_t i : idx) out.frames.push_back(seq.frames[i]);
    return out;
}

SkeletonSequence preprocess(const SkeletonSequence& seq, std::size_t target_len) {
    return resample_temporal(normalize_scale(center_translate(remap_sequence(seq))), target_len);
}

}  // namespace actsem
