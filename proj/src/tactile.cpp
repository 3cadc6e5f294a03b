#include "actsem/tactile.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "actsem/error.hpp"

namespace actsem {

std::string_view to_string(GlyphViolation v) {
    switch (v) {
        case GlyphViolation::FullWithSegments: return "FullWithSegments";
        case GlyphViolation::WrongFullCount: return "WrongFullCount";
        case GlyphViolation::AllEmpty: return "AllEmpty";
    }
    return "Unknown";
}

bool ValidationReport::has(GlyphViolation v) const {
    return std::find(violations.begin(), violations.end(), v) != violations.end();
}

ValidationReport validate_glyph(const TactileGlyph& g, ValidationMode mode) {
    ValidationReport report;
    std::size_t full = 0;
    for (std::size_t i = 0; i < kGlyphNodes; ++i) {
        const auto& n = g.nodes[i];
        if (n.full) ++full;
        if (n.full && n.segments != 0) report.offending_nodes.push_back(i);
    }
    if (!report.offending_nodes.empty()) report.violations.push_back(GlyphViolation::FullWithSegments);
    if (mode == ValidationMode::Registry && full != 1) report.violations.push_back(GlyphViolation::WrongFullCount);
    if (std::all_of(g.nodes.begin(), g.nodes.end(), [](const NodeState& n) { return n.empty(); }))
        report.violations.push_back(GlyphViolation::AllEmpty);
    return report;
}

DeviceFrame encode_frame(const TactileGlyph& g) {
    DeviceFrame f{};
    f[0] = kFrameMagic0;
    f[1] = kFrameMagic1;
    f[2] = kFrameVersion;
    std::uint8_t check = 0;
    for (std::size_t i = 0; i < kGlyphNodes; ++i) {
        const std::uint16_t word = static_cast<std::uint16_t>(g.nodes[i].segments | (g.nodes[i].full ? kFullBit : 0));
        f[3 + 2 * i] = static_cast<std::uint8_t>(word & 0xFF);
        f[4 + 2 * i] = static_cast<std::uint8_t>(word >> 8);
        check ^= f[3 + 2 * i];
        check ^= f[4 + 2 * i];
    }
    f[kFrameSize - 1] = check;
    return f;
}

TactileGlyph decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kFrameSize)
        throw Error(ErrorCode::TruncatedStream, "TGF1 frame must be 22 bytes, got " + std::to_string(bytes.size()));
    if (bytes[0] != kFrameMagic0 || bytes[1] != kFrameMagic1) throw Error(ErrorCode::BadMagic, "not a TGF1 frame");
    if (bytes[2] != kFrameVersion) throw Error(ErrorCode::BadVersion, "TGF version " + std::to_string(bytes[2]));
    std::uint8_t check = 0;
    for (std::size_t i = 3; i < kFrameSize - 1; ++i) check ^= bytes[i];
    if (check != bytes[kFrameSize - 1]) throw Error(ErrorCode::BadChecksum, "TGF1 checksum mismatch");

    TactileGlyph g;
    for (std::size_t i = 0; i < kGlyphNodes; ++i) {
        const std::uint16_t word = static_cast<std::uint16_t>(bytes[3 + 2 * i] | (bytes[4 + 2 * i] << 8));
        if (word & kReservedMask)
            throw Error(ErrorCode::ReservedBitsSet, "node " + std::to_string(i) + " word 0x" +
                                                        to_hex(bytes.subspan(3 + 2 * i, 2)));
        g.nodes[i].segments = static_cast<std::uint8_t>(word & 0xFF);
        g.nodes[i].full = (word & kFullBit) != 0;
    }
    return g;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::vector<std::uint8_t> from_hex(const std::string& hex) {
    std::string digits;
    for (char c : hex)
        if (!std::isspace(static_cast<unsigned char>(c))) digits.push_back(c);
    if (digits.size() % 2) throw Error(ErrorCode::InvalidArgument, "odd number of hex digits");
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        const int hi = hex_value(digits[i]), lo = hex_value(digits[i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorCode::InvalidArgument, "non-hex character in '" + hex + "'");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string node_token(const NodeState& n) {
    if (n.full) return "F";
    static constexpr char digits[] = "0123456789ABCDEF";
    return {digits[n.segments >> 4], digits[n.segments & 0xF]};
}

NodeState parse_node_token(const std::string& token) {
    if (token == "F") return NodeState{0, true};
    if (token.size() == 2) {
        const int hi = hex_value(token[0]), lo = hex_value(token[1]);
        if (hi >= 0 && lo >= 0) return NodeState{static_cast<std::uint8_t>(hi << 4 | lo), false};
    }
    throw Error(ErrorCode::InvalidNodeToken, "'" + token + "' is neither F nor two hex digits");
}

std::string glyph_tokens(const TactileGlyph& g) {
    std::string out;
    for (std::size_t i = 0; i < kGlyphNodes; ++i) {
        if (i) out.push_back(' ');
        out += node_token(g.nodes[i]);
    }
    return out;
}

TactileGlyph parse_glyph_tokens(const std::string& text) {
    std::istringstream in(text);
    TactileGlyph g;
    std::string tok;
    std::size_t n = 0;
    while (in >> tok) {
        if (n == kGlyphNodes) throw Error(ErrorCode::InvalidNodeToken, "more than 9 node tokens");
        g.nodes[n++] = parse_node_token(tok);
    }
    if (n != kGlyphNodes) throw Error(ErrorCode::InvalidNodeToken, "expected 9 node tokens, got " + std::to_string(n));
    return g;
}

namespace {

// Tile cell for each segment bit, clockwise from the top.
struct SegmentCell {
    std::size_t row, col;
    char glyph;
};
constexpr std::array<SegmentCell, kSegmentsPerNode> kSegmentCells{{
    {0, 1, '|'},   // N
    {0, 2, '/'},   // NE
    {1, 2, '-'},   // E
    {2, 2, '\\'},  // SE
    {2, 1, '|'},   // S
    {2, 0, '/'},   // SW
    {1, 0, '-'},   // W
    {0, 0, '\\'},  // NW
}};

using Tile = std::array<std::array<char, 3>, 3>;

Tile render_node(const NodeState& n) {
    Tile t;
    for (auto& row : t) row.fill(n.full ? '#' : ' ');
    if (n.full) return t;
    for (std::size_t b = 0; b < kSegmentsPerNode; ++b)
        if (n.segments & (1u << b)) t[kSegmentCells[b].row][kSegmentCells[b].col] = kSegmentCells[b].glyph;
    t[1][1] = n.segments ? 'o' : '.';
    return t;
}

}  // namespace

std::string render_ascii(const TactileGlyph& g) {
    std::string out;
    for (std::size_t r = 0; r < kGlyphRows; ++r) {
        if (r) out += std::string(kGlyphCols * 4 - 1, ' ') + '\n';
        std::array<Tile, kGlyphCols> tiles;
        for (std::size_t c = 0; c < kGlyphCols; ++c) tiles[c] = render_node(g.at(r, c));
        for (std::size_t line = 0; line < 3; ++line) {
            for (std::size_t c = 0; c < kGlyphCols; ++c) {
                if (c) out.push_back(' ');
                out.append(tiles[c][line].begin(), tiles[c][line].end());
            }
            out.push_back('\n');
        }
    }
    return out;
}

void LabelRegistry::add(std::size_t class_id, LabelEntry entry) {
    if (entries_.count(class_id)) throw Error(ErrorCode::DuplicateClassId, "class id " + std::to_string(class_id));
    const auto report = validate_glyph(entry.glyph, ValidationMode::Registry);
    if (!report.ok())
        throw Error(ErrorCode::GlyphInvariantViolation, "class " + std::to_string(class_id) + " (" + entry.class_name +
                                                            "): " + std::string(to_string(report.violations.front())));
    for (const auto& [id, existing] : entries_)
        if (existing.glyph == entry.glyph)
            throw Error(ErrorCode::DuplicateGlyph, "classes " + std::to_string(id) + " and " +
                                                       std::to_string(class_id) + " share a glyph");
    entries_.emplace(class_id, std::move(entry));
}

const LabelEntry& LabelRegistry::entry(std::size_t class_id) const {
    const auto it = entries_.find(class_id);
    if (it == entries_.end()) throw Error(ErrorCode::UnknownClass, "no glyph registered for class " + std::to_string(class_id));
    return it->second;
}

const TactileGlyph& LabelRegistry::lookup(std::size_t class_id) const { return entry(class_id).glyph; }

const TactileGlyph& lookup_label(std::size_t class_id, const LabelRegistry& registry) {
    return registry.lookup(class_id);
}

LabelRegistry parse_registry(std::istream& in) {
    LabelRegistry registry;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto where = "line " + std::to_string(line_no) + ": ";
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos)
            throw Error(ErrorCode::MalformedLine, where + "expected 'id<TAB>name<TAB>nodes'");
        const std::string id_text = line.substr(0, tab1);
        if (id_text.empty() || id_text.size() > 9 ||
            !std::all_of(id_text.begin(), id_text.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw Error(ErrorCode::MalformedLine, where + "class id '" + id_text + "'");
        const std::string name = line.substr(tab1 + 1, tab2 - tab1 - 1);
        if (name.empty()) throw Error(ErrorCode::MalformedLine, where + "empty class name");
        try {
            registry.add(std::stoul(id_text), LabelEntry{name, parse_glyph_tokens(line.substr(tab2 + 1))});
        } catch (const Error& e) {
            throw Error(e.code(), where + e.what());
        }
    }
    return registry;
}

LabelRegistry load_registry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open registry " + path);
    return parse_registry(in);
}

void write_registry(std::ostream& out, const LabelRegistry& registry) {
    for (const auto& [id, e] : registry.entries()) out << id << '\t' << e.class_name << '\t' << glyph_tokens(e.glyph) << '\n';
}

}  // namespace actsem
