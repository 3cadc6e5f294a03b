#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace actsem {

inline constexpr std::size_t kV1JointCount = 20;
inline constexpr std::size_t kV2JointCount = 25;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

Vec3 operator-(const Vec3& a, const Vec3& b);
double distance(const Vec3& a, const Vec3& b);

/// 1-based joint number in the 25-joint layout (21..25 exist only on the
/// newer sensor and are synthesized for 20-joint captures).
class JointId {
public:
    explicit JointId(int number);

    int number() const noexcept { return number_; }
    std::size_t index() const noexcept { return static_cast<std::size_t>(number_ - 1); }
    bool v2_only() const noexcept { return number_ > 20; }

    friend bool operator==(const JointId&, const JointId&) = default;

private:
    int number_;
};

/// One captured pose. Holds 20 joints straight off a v1 capture (before
/// remapping) or 25 joints after remapping / for v2 captures.
struct SkeletonFrame {
    std::vector<Vec3> joints;
    std::vector<bool> valid;

    std::size_t joint_count() const noexcept { return joints.size(); }
    const Vec3& at(JointId id) const { return joints.at(id.index()); }

    friend bool operator==(const SkeletonFrame&, const SkeletonFrame&) = default;
};

struct SkeletonSequence {
    std::vector<SkeletonFrame> frames;
    double frame_rate_hz = 30.0;
    std::optional<int> subject_id;
    std::optional<int> label;

    std::size_t joint_count() const { return frames.empty() ? 0 : frames.front().joint_count(); }

    friend bool operator==(const SkeletonSequence&, const SkeletonSequence&) = default;
};

/// Copy table for the five joints missing from 20-joint captures:
/// {target, source}, both 1-based.
inline constexpr std::array<std::array<int, 2>, 5> kFillInTable{{
    {21, 3},
    {22, 7},
    {23, 7},
    {24, 11},
    {25, 11},
}};

/// Reference joint for translation (spine base) and the reference bone used
/// for scale (spine base -> spine mid).
inline constexpr int kCenterJoint = 1;
inline constexpr int kScaleBoneFrom = 1;
inline constexpr int kScaleBoneTo = 2;
inline constexpr double kMinBoneLength = 1e-6;

// SKL1 text format.
SkeletonSequence parse_skeleton(std::istream& in);
SkeletonSequence parse_skeleton_string(const std::string& text);
SkeletonSequence load_skeleton_file(const std::string& path);
void write_skeleton(std::ostream& out, const SkeletonSequence& seq);
std::string serialize_skeleton(const SkeletonSequence& seq);

SkeletonFrame remap_v1_to_v2(const SkeletonFrame& frame);
/// Remaps every 20-joint frame; 25-joint sequences are returned unchanged.
SkeletonSequence remap_sequence(const SkeletonSequence& seq);

SkeletonSequence center_translate(const SkeletonSequence& seq, JointId ref = JointId(kCenterJoint));
SkeletonSequence normalize_scale(const SkeletonSequence& seq);
SkeletonSequence resample_temporal(const SkeletonSequence& seq, std::size_t target_len);
/// Index schedule used by resample_temporal.
std::vector<std::size_t> resample_indices(std::size_t source_len, std::size_t target_len);

/// remap (if needed) -> center -> scale -> resample.
SkeletonSequence preprocess(const SkeletonSequence& seq, std::size_t target_len);

}  // namespace actsem
