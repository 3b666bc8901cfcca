#include <qto/catalogs.hpp>
#include <qto/scene.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace qto;

namespace {

const std::filesystem::path kData = QTO_DATA_DIR;

CatalogSet default_catalogs() {
    return load_catalogs(read_text_file(kData / "sections.csv"), read_text_file(kData / "pipes.csv"),
                         read_text_file(kData / "materials.csv"));
}

constexpr const char* kPipeHeader = "npd,schedule,outer_diameter_m,thickness_m\n";

} // namespace

TEST(LoadCatalogs, CatalogRowsParse) {
    const CatalogSet cat = load_catalogs("name,area_m2,linear_mass_kg_per_m\nW310×79,0.0101,80.661\n",
                                         std::string(kPipeHeader) + "24,S-60,0.6096,0.02461\n",
                                         "name,density_ton_per_m3\nCS-PIPE,7.853753057\n");
    const SectionRecord* w = cat.lookup_section("W310×79");
    ASSERT_NE(w, nullptr);
    EXPECT_DOUBLE_EQ(w->area_m2, 0.0101);
    EXPECT_DOUBLE_EQ(w->linear_mass_kg_per_m, 80.661);
    const PipeRecord* p = cat.lookup_pipe("24", "S-60");
    ASSERT_NE(p, nullptr);
    EXPECT_DOUBLE_EQ(p->outer_diameter_m, 0.6096);
    EXPECT_DOUBLE_EQ(p->thickness_m, 0.02461);
    ASSERT_NE(cat.lookup_material("cs-pipe"), nullptr);
}

TEST(LoadCatalogs, ColumnOrderFollowsHeader) {
    CatalogSet cat;
    load_sections(cat, "linear_mass_kg_per_m,name,area_m2\r\n119.68,W310×118,0.0151\r\n");
    ASSERT_NE(cat.lookup_section("W310×118"), nullptr);
    EXPECT_DOUBLE_EQ(cat.lookup_section("W310×118")->area_m2, 0.0151);
}

TEST(LoadCatalogs, Errors) {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CatalogSet cat;
    EXPECT_EQ(code([&] { load_pipes(cat, std::string(kPipeHeader) + "x,y,0.6,0.4\n"); }),
              ErrorCode::InvariantViolation);
    EXPECT_EQ(code([&] { load_pipes(cat, "npd,schedule,outer_diameter_m\n24,S-60,0.6\n"); }),
              ErrorCode::MissingColumn);
    EXPECT_EQ(code([&] { load_materials(cat, "name,density_ton_per_m3\nSTEEL,seven\n"); }),
              ErrorCode::MalformedNumber);
    EXPECT_EQ(code([&] { load_materials(cat, "name,density_ton_per_m3\nSTEEL,0\n"); }), ErrorCode::InvariantViolation);
    EXPECT_EQ(code([&] { load_sections(cat, "name,area_m2,linear_mass_kg_per_m\nW310×79,0.0101,80.661\nw310x79,1,1\n"); }),
              ErrorCode::DuplicateKey);
    EXPECT_EQ(code([&] { load_sections(cat, ""); }), ErrorCode::MissingColumn);
    try {
        CatalogSet c2;
        load_materials(c2, "name,density_ton_per_m3\nA,1\nB,1,2\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Syntax);
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(LookupSection, NormalizedExactMatch) {
    const CatalogSet cat = default_catalogs();
    const SectionRecord* heavy = cat.lookup_section("W310×118");
    ASSERT_NE(heavy, nullptr);
    EXPECT_DOUBLE_EQ(heavy->area_m2, 0.0151);
    EXPECT_DOUBLE_EQ(heavy->linear_mass_kg_per_m, 119.68);
    EXPECT_EQ(cat.lookup_section("w310x79"), cat.lookup_section("W310×79"));
    EXPECT_EQ(cat.lookup_section("  W310X79 "), cat.lookup_section("W310×79"));
    EXPECT_EQ(cat.lookup_section("PIPE-24"), nullptr);
    EXPECT_EQ(cat.lookup_section("W310"), nullptr);
    // Deterministic on repeat.
    EXPECT_EQ(cat.lookup_section("w310x79"), cat.lookup_section("w310x79"));
}

TEST(PipeInnerDiameter, CatalogValues) {
    EXPECT_NEAR(pipe_inner_diameter({"24", "S-60", 0.6096, 0.02461}), 0.56038, 1e-12);
    EXPECT_DOUBLE_EQ(pipe_inner_diameter({"x", "y", 1.0, 0.25}), 0.5);
    EXPECT_NEAR(pipe_inner_diameter({"24", "S-60", 0.609574974, 0.02461}), 0.560354974, 1e-12);
}

TEST(PipeInnerDiameter, ReassemblesOuterDiameter) {
    const CatalogSet cat = default_catalogs();
    for (const auto& [key, p] : cat.pipes()) {
        // One subtraction and one addition: at most one ulp away (8" S-40 is).
        const double back = pipe_inner_diameter(p) + 2.0 * p.thickness_m;
        const double ulp = std::nextafter(p.outer_diameter_m, 1.0) - p.outer_diameter_m;
        EXPECT_LE(std::abs(back - p.outer_diameter_m), ulp) << p.npd;
    }
}

TEST(SerializeCatalogs, ReloadIsIdentical) {
    const CatalogSet cat = default_catalogs();
    const CatalogCsv csv = serialize_catalogs(cat);
    EXPECT_EQ(load_catalogs(csv.sections, csv.pipes, csv.materials), cat);
}
