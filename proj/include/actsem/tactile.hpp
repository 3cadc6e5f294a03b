#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace actsem {

/// Number of raisable cuboids around one node, at 45 degree steps. Bit 0 is
/// the top segment, bits advance clockwise.
inline constexpr std::size_t kSegmentsPerNode = 8;
inline constexpr std::size_t kGlyphRows = 3;
inline constexpr std::size_t kGlyphCols = 3;
inline constexpr std::size_t kGlyphNodes = kGlyphRows * kGlyphCols;

struct NodeState {
    std::uint8_t segments = 0;
    bool full = false;

    bool empty() const noexcept { return segments == 0 && !full; }
    friend bool operator==(const NodeState&, const NodeState&) = default;
    friend auto operator<=>(const NodeState&, const NodeState&) = default;
};

/// 3x3 cell, row-major from the top-left node.
struct TactileGlyph {
    std::array<NodeState, kGlyphNodes> nodes{};

    NodeState& at(std::size_t row, std::size_t col) { return nodes[row * kGlyphCols + col]; }
    const NodeState& at(std::size_t row, std::size_t col) const { return nodes[row * kGlyphCols + col]; }

    friend bool operator==(const TactileGlyph&, const TactileGlyph&) = default;
    friend auto operator<=>(const TactileGlyph&, const TactileGlyph&) = default;
};

enum class GlyphViolation {
    FullWithSegments,
    WrongFullCount,
    AllEmpty,
};

std::string_view to_string(GlyphViolation v);

enum class ValidationMode {
    Registry,  // exactly one FULL node (the head)
    Relaxed,   // any FULL count
};

struct ValidationReport {
    std::vector<GlyphViolation> violations;
    std::vector<std::size_t> offending_nodes;  // nodes with FULL and segments

    bool ok() const noexcept { return violations.empty(); }
    bool has(GlyphViolation v) const;
};

ValidationReport validate_glyph(const TactileGlyph& g, ValidationMode mode = ValidationMode::Registry);

// TGF1 device frame.
inline constexpr std::size_t kFrameSize = 22;
inline constexpr std::uint8_t kFrameMagic0 = 0x54;
inline constexpr std::uint8_t kFrameMagic1 = 0x47;
inline constexpr std::uint8_t kFrameVersion = 0x01;
inline constexpr std::uint16_t kFullBit = 0x0100;
inline constexpr std::uint16_t kReservedMask = 0xFE00;

using DeviceFrame = std::array<std::uint8_t, kFrameSize>;

DeviceFrame encode_frame(const TactileGlyph& g);
TactileGlyph decode_frame(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(const std::string& hex);

/// Node token as used in registry files: `F` or two hex digits.
std::string node_token(const NodeState& n);
NodeState parse_node_token(const std::string& token);
/// Nine space-separated node tokens.
std::string glyph_tokens(const TactileGlyph& g);
TactileGlyph parse_glyph_tokens(const std::string& text);

/// Each node becomes a 3x3 character tile; tiles are separated by one space
/// and tile rows by one blank line.
std::string render_ascii(const TactileGlyph& g);

struct LabelEntry {
    std::string class_name;
    TactileGlyph glyph;

    friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

/// Class id -> (name, glyph). Every glyph passes registry validation and no
/// two classes share a glyph.
class LabelRegistry {
public:
    void add(std::size_t class_id, LabelEntry entry);

    const TactileGlyph& lookup(std::size_t class_id) const;
    const LabelEntry& entry(std::size_t class_id) const;
    bool contains(std::size_t class_id) const { return entries_.count(class_id) != 0; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::size_t, LabelEntry>& entries() const noexcept { return entries_; }

    friend bool operator==(const LabelRegistry&, const LabelRegistry&) = default;

private:
    std::map<std::size_t, LabelEntry> entries_;
};

const TactileGlyph& lookup_label(std::size_t class_id, const LabelRegistry& registry);

/// TGR1 text: `class_id<TAB>class_name<TAB>n1 ... n9`, `#` comments.
LabelRegistry parse_registry(std::istream& in);
LabelRegistry load_registry_file(const std::string& path);
void write_registry(std::ostream& out, const LabelRegistry& registry);

}  // namespace actsem
