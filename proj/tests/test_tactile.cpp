#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "actsem/tactile.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace actsem;

namespace {

const std::string kFixtures = ACTSEM_FIXTURE_DIR;

TactileGlyph head_only(std::size_t node) {
    TactileGlyph g;
    g.nodes[node].full = true;
    return g;
}

DeviceFrame valid_frame() {
    auto g = head_only(1);
    g.nodes[4].segments = 0x15;
    g.nodes[7].segments = 0x29;
    return encode_frame(g);
}

}  // namespace

// ---- validation -------------------------------------------------------------

TEST(Validate, OneFullNodeIsValid) {
    std::mt19937 rng(71);
    for (int i = 0; i < 50; ++i) EXPECT_TRUE(validate_glyph(oracle::random_glyph(rng)).ok());
}

TEST(Validate, NoFullNodeInvalidForRegistry) {
    TactileGlyph g;
    g.nodes[4].segments = 0x11;
    const auto report = validate_glyph(g);
    EXPECT_TRUE(report.has(GlyphViolation::WrongFullCount));
    EXPECT_TRUE(validate_glyph(g, ValidationMode::Relaxed).ok());
}

TEST(Validate, FullWithSegments) {
    auto g = head_only(0);
    g.nodes[3] = {0x0F, true};
    const auto report = validate_glyph(g);
    EXPECT_TRUE(report.has(GlyphViolation::FullWithSegments));
    EXPECT_EQ(report.offending_nodes, (std::vector<std::size_t>{3}));
}

TEST(Validate, AllEmpty) {
    const auto report = validate_glyph(TactileGlyph{}, ValidationMode::Relaxed);
    EXPECT_TRUE(report.has(GlyphViolation::AllEmpty));
}

// ---- frame codec ------------------------------------------------------------

TEST(Frame, EmptyGlyphBytes) {
    const auto f = encode_frame(TactileGlyph{});
    EXPECT_EQ(f[0], 0x54);
    EXPECT_EQ(f[1], 0x47);
    EXPECT_EQ(f[2], 0x01);
    for (std::size_t i = 3; i < 21; ++i) EXPECT_EQ(f[i], 0);
    EXPECT_EQ(f[21], 0);
}

TEST(Frame, HandAssembledHeadAtTopCentre) {
    DeviceFrame expected{};
    expected[0] = 0x54;
    expected[1] = 0x47;
    expected[2] = 0x01;
    // word 1 = 0x0100, little-endian
    expected[3 + 2] = 0x00;
    expected[3 + 3] = 0x01;
    std::uint8_t x = 0;
    for (std::size_t i = 3; i < 21; ++i) x ^= expected[i];
    expected[21] = x;
    EXPECT_EQ(encode_frame(head_only(1)), expected);
    EXPECT_EQ(expected[21], 0x01);
}

TEST(Frame, RoundTrip) {
    std::mt19937 rng(72);
    for (int i = 0; i < 500; ++i) {
        const auto g = oracle::random_glyph(rng, i % 2 == 0);
        EXPECT_EQ(decode_frame(encode_frame(g)), g);
    }
}

TEST(Frame, Rejections) {
    const auto good = valid_frame();
    auto sum = good;
    sum[21] ^= 0xFF;
    EXPECT_ERROR_CODE(decode_frame(sum), ErrorCode::BadChecksum);
    auto magic = good;
    magic[0] = 0x55;
    EXPECT_ERROR_CODE(decode_frame(magic), ErrorCode::BadMagic);
    auto version = good;
    version[2] = 2;
    EXPECT_ERROR_CODE(decode_frame(version), ErrorCode::BadVersion);
    const std::vector<std::uint8_t> shorter(good.begin(), good.end() - 1);
    EXPECT_ERROR_CODE(decode_frame(shorter), ErrorCode::TruncatedStream);
}

TEST(Frame, ReservedBitsInEveryWord) {
    const auto good = valid_frame();
    for (std::size_t word = 0; word < 9; ++word)
        for (int bit = 9; bit < 16; ++bit) {
            auto f = good;
            f[4 + 2 * word] ^= static_cast<std::uint8_t>(1u << (bit - 8));
            f[21] ^= static_cast<std::uint8_t>(1u << (bit - 8));  // keep the checksum consistent
            EXPECT_ERROR_CODE(decode_frame(f), ErrorCode::ReservedBitsSet);
        }
}

TEST(Frame, EverySingleByteCorruptionRejected) {
    const auto good = valid_frame();
    for (std::size_t i = 0; i < kFrameSize; ++i)
        for (int v = 0; v < 256; ++v) {
            if (v == good[i]) continue;
            auto f = good;
            f[i] = static_cast<std::uint8_t>(v);
            EXPECT_THROW(decode_frame(f), Error) << i << " " << v;
        }
}

TEST(Frame, HexRoundTrip) {
    const auto f = valid_frame();
    const std::string hex = to_hex(f);
    EXPECT_EQ(hex.size(), 44u);
    const auto back = from_hex(hex);
    EXPECT_TRUE(std::equal(back.begin(), back.end(), f.begin(), f.end()));
    EXPECT_ERROR_CODE(from_hex("abc"), ErrorCode::InvalidArgument);
}

// ---- tokens -----------------------------------------------------------------

TEST(Tokens, ParseAndEmit) {
    EXPECT_EQ(parse_node_token("F"), (NodeState{0, true}));
    EXPECT_EQ(parse_node_token("a5"), (NodeState{0xA5, false}));
    EXPECT_EQ(node_token(NodeState{0xA5, false}), "A5");
    EXPECT_EQ(node_token(NodeState{0, true}), "F");
    EXPECT_ERROR_CODE(parse_node_token("G1"), ErrorCode::InvalidNodeToken);
    EXPECT_ERROR_CODE(parse_node_token("123"), ErrorCode::InvalidNodeToken);
    EXPECT_ERROR_CODE(parse_glyph_tokens("00 F 00"), ErrorCode::InvalidNodeToken);
}

// ---- registry ---------------------------------------------------------------

TEST(Registry, DuplicateClassId) {
    std::istringstream in("0\tA\t00 F 00 00 15 00 00 29 00\n0\tB\t00 F 00 00 11 00 00 29 00\n");
    EXPECT_ERROR_CODE(parse_registry(in), ErrorCode::DuplicateClassId);
}

TEST(Registry, InvalidToken) {
    std::istringstream in("0\tA\tG1 F 00 00 15 00 00 29 00\n");
    EXPECT_ERROR_CODE(parse_registry(in), ErrorCode::InvalidNodeToken);
}

TEST(Registry, GlyphInvariantEnforced) {
    std::istringstream none("0\tA\t00 00 00 00 15 00 00 29 00\n");
    EXPECT_ERROR_CODE(parse_registry(none), ErrorCode::GlyphInvariantViolation);
    std::istringstream two("0\tA\tF F 00 00 15 00 00 29 00\n");
    EXPECT_ERROR_CODE(parse_registry(two), ErrorCode::GlyphInvariantViolation);
}

TEST(Registry, DuplicateGlyph) {
    std::istringstream in("0\tA\t00 F 00 00 15 00 00 29 00\n1\tB\t00 F 00 00 15 00 00 29 00\n");
    EXPECT_ERROR_CODE(parse_registry(in), ErrorCode::DuplicateGlyph);
}

TEST(Registry, DefaultCoversTheTestedActions) {
    const std::vector<std::string> actions{
        "Drink",      "Brush teeth", "Brush hair",    "Eat meal/snacks",   "Phone call",
        "Playing with/using phone",  "Throw",         "Sit down",          "Stand up",
        "Clapping",   "Hand waving", "Jump up",       "Kicking something", "Falling",
        "Fan self",   "Writing",     "Reading",       "Take off/put on shoes", "Wipe face",
    };
    const auto reg = load_registry_file(kFixtures + "/registry/default.tgr");
    EXPECT_EQ(reg.size(), actions.size());
    std::set<std::string> names;
    for (const auto& [id, e] : reg.entries()) {
        names.insert(e.class_name);
        EXPECT_TRUE(validate_glyph(lookup_label(id, reg)).ok());
    }
    EXPECT_EQ(names, std::set<std::string>(actions.begin(), actions.end()));
}

TEST(Registry, LabelTableClassesAreDistinct) {
    const auto reg = load_registry_file(kFixtures + "/registry/compact.tgr");
    const std::set<std::string> expected{"Clapping",          "Phone call", "Drinking",  "Eat meal/snacks",
                                         "Hand-wave",         "Kicking something", "Touch head"};
    std::set<std::string> names;
    std::set<TactileGlyph> glyphs;
    for (const auto& [id, e] : reg.entries()) {
        names.insert(e.class_name);
        glyphs.insert(lookup_label(id, reg));
    }
    EXPECT_EQ(names, expected);
    EXPECT_EQ(glyphs.size(), 7u);
}

TEST(Registry, UnknownClass) {
    const auto reg = load_registry_file(kFixtures + "/registry/compact.tgr");
    EXPECT_ERROR_CODE(lookup_label(99, reg), ErrorCode::UnknownClass);
}

TEST(Registry, RoundTrip) {
    for (const char* name : {"default.tgr", "compact.tgr"}) {
        const auto reg = load_registry_file(kFixtures + "/registry/" + name);
        std::stringstream ss;
        write_registry(ss, reg);
        EXPECT_EQ(parse_registry(ss), reg) << name;
    }
}

// ---- render -----------------------------------------------------------------

TEST(Render, EmptyGlyphGrid) {
    const std::string text = render_ascii(TactileGlyph{});
    const std::string tile_row = " .   .   . \n";
    const std::string blank = std::string(11, ' ') + "\n";
    const std::string tile = blank + tile_row + blank;
    EXPECT_EQ(text, tile + blank + tile + blank + tile);
    EXPECT_EQ(render_ascii(TactileGlyph{}), text);
}

TEST(Render, FullNodeIsSolidAndDistinct) {
    const std::string full = render_ascii(head_only(0));
    EXPECT_EQ(full.substr(0, 3), "###");
    for (int s = 0; s < 256; ++s) {
        TactileGlyph g;
        g.nodes[0].segments = static_cast<std::uint8_t>(s);
        EXPECT_NE(render_ascii(g), full);
    }
}

TEST(Render, SegmentPlacement) {
    TactileGlyph g;
    g.nodes[0].segments = 0xFF;
    const std::string text = render_ascii(g);
    EXPECT_EQ(text.substr(0, 3), "\\|/");
    EXPECT_EQ(text.substr(12, 3), "-o-");
    EXPECT_EQ(text.substr(24, 3), "/|\\");
}

TEST(Render, InjectiveOnRandomPairs) {
    std::mt19937 rng(73);
    std::map<std::string, TactileGlyph> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto g = oracle::random_glyph(rng, i % 3 != 0);
        const auto [it, inserted] = seen.emplace(render_ascii(g), g);
        if (!inserted) EXPECT_EQ(it->second, g);
    }
}
