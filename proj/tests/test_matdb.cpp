#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ncf/matdb.hpp"

using namespace ncf::matdb;
using nlohmann::json;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("ncf_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = temp_path(name);
    std::ofstream(path) << text;
    return path;
}

const std::string extra = std::string(NCF_DATA_DIR) + "/materials_extra.json";
} // namespace

TEST(Builtins, Values)
{
    const auto all = builtin_materials();
    ASSERT_EQ(all.size(), 6u);
    EXPECT_NO_THROW(validate(all));
    EXPECT_EQ(*find(all, "Au")->sigma_dc, 2.30e7);
    EXPECT_EQ(*find(all, "V")->sigma_dc, 5.08e6);
    EXPECT_EQ(*find(all, "Ti")->sigma_dc, 1.27e6);
    EXPECT_EQ(*find(all, "graphite")->sigma_dc, 1.28e5);
    EXPECT_EQ(*find(all, "quartz-o")->l_value, 1.40e-17);
    EXPECT_EQ(*find(all, "quartz-e")->l_value, 2.14e-17);
    EXPECT_EQ(find(all, "unobtainium"), nullptr);
    for (const auto& m : all) EXPECT_FALSE(m.notes.empty());
}

TEST(Builtins, GraphiteResolvesToReferenceValue)
{
    const auto all = builtin_materials();
    EXPECT_LT(rel(resolve_L(*find(all, "graphite")), 1.38e-16), 0.01);
}

TEST(ResolveL, ByKind)
{
    EXPECT_LT(rel(resolve_L(Material::conductor("x", 2.30e7)), 2 * ncf::constants().eps0 / 2.30e7), 1e-15);
    EXPECT_EQ(resolve_L(Material::direct("y", 3.3e-17)), 3.3e-17);
    const auto model = ncf::dielectric::load_model(std::string(NCF_DATA_DIR) + "/two_resonance_model.json");
    const double L = resolve_L(Material::insulator("z", model));
    EXPECT_LT(rel(L, ncf::dielectric::l_coefficient_numeric(model)), 1e-3);
}

TEST(ResolveL, KindMismatch)
{
    auto m = Material::conductor("x", 1e6);
    m.kind = MaterialKind::direct_L;
    EXPECT_THROW(resolve_L(m), UnresolvableMaterial);
    auto n = Material::direct("y", 1e-17);
    n.kind = MaterialKind::insulator_model;
    EXPECT_THROW(resolve_L(n), UnresolvableMaterial);
}

TEST(Validation, Violations)
{
    auto both = Material::conductor("both", 1e6);
    both.l_value = 1e-17;
    EXPECT_EQ(violations(both).size(), 1u);
    EXPECT_FALSE(violations(Material::conductor("neg", -1.0)).empty());
    EXPECT_FALSE(violations(Material::direct("neg", -1e-17)).empty());
    EXPECT_FALSE(violations(Material::direct("", 1e-17)).empty());
    EXPECT_TRUE(violations(Material::direct("zero", 0.0)).empty());

    std::vector<Material> dup{Material::direct("q", 1e-17), Material::direct("q", 2e-17)};
    EXPECT_THROW(validate(dup), ncf::ValidationError);
}

TEST(Validation, ListsEveryViolation)
{
    std::vector<Material> bad{Material::conductor("a", -1.0), Material::direct("b", NAN)};
    try
    {
        validate(bad);
        FAIL();
    }
    catch (const ncf::ValidationError& e)
    {
        EXPECT_EQ(e.violations().size(), 2u);
    }
}

TEST(Json, RoundTripBuiltins)
{
    const auto path = temp_path("roundtrip.json");
    const auto all = builtin_materials();
    save_materials(path, all);
    EXPECT_EQ(load_materials(path), all);
    std::filesystem::remove(path);
}

TEST(Json, RoundTripIsBitExact)
{
    std::vector<Material> ms{Material::direct("pi-ish", 3.14159265358979311599796346854e-17),
                             Material::conductor("odd", 1.0 / 3.0 * 1e7)};
    const auto back = materials_from_json(json::parse(to_json(ms).dump()));
    EXPECT_EQ(*back[0].l_value, *ms[0].l_value);
    EXPECT_EQ(*back[1].sigma_dc, *ms[1].sigma_dc);
}

TEST(Json, ExtraDataFile)
{
    const auto ms = load_materials(extra);
    ASSERT_EQ(ms.size(), 3u);
    EXPECT_EQ(resolve_L(*find(ms, "vacuumlike")), 0.0);
    EXPECT_GT(resolve_L(*find(ms, "two-line-glass")), 0.0);
    EXPECT_EQ(find(ms, "copper")->kind, MaterialKind::conductor);
}

TEST(Json, OneConductorEntry)
{
    const auto path = write_temp("one.json",
                                 R"({"materials": [{"name": "Cu", "kind": "conductor", "sigma_dc_per_ohm_m": 5.96e7}]})");
    const auto ms = load_materials(path);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0], Material::conductor("Cu", 5.96e7));
    std::filesystem::remove(path);
}

TEST(Json, BothSigmaAndLRejected)
{
    const auto path = write_temp(
        "both.json",
        R"({"materials": [{"name": "X", "kind": "conductor", "sigma_dc_per_ohm_m": 1e6, "l_per_rad_per_s": 1e-17}]})");
    EXPECT_THROW(load_materials(path), ncf::ValidationError);
    std::filesystem::remove(path);
}

TEST(Json, DuplicateNamesRejected)
{
    const auto path = write_temp(
        "dup.json",
        R"({"materials": [{"name": "X", "kind": "direct_L", "l_per_rad_per_s": 1e-17},
                          {"name": "X", "kind": "direct_L", "l_per_rad_per_s": 2e-17}]})");
    EXPECT_THROW(load_materials(path), ncf::ValidationError);
    std::filesystem::remove(path);
}

TEST(Json, ParseDiagnostics)
{
    EXPECT_THROW(load_materials("/nonexistent/materials.json"), ncf::ParseError);
    const auto broken = write_temp("broken.json", "{\"materials\": [\n{\"name\": }\n]}");
    try
    {
        load_materials(broken);
        FAIL();
    }
    catch (const ncf::ParseError& e)
    {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    std::filesystem::remove(broken);

    EXPECT_THROW(materials_from_json(json::array()), ncf::ParseError);
    EXPECT_THROW(materials_from_json(json{{"materials", {{{"name", "x"}, {"kind", "metal"}}}}}), ncf::ParseError);
    EXPECT_THROW(materials_from_json(json{{"materials", {{{"name", "x"}, {"kind", "direct_L"}, {"L", 1.0}}}}}),
                 ncf::ParseError);
    EXPECT_THROW(materials_from_json(json{{"materials", {{{"name", "x"}, {"kind", "direct_L"}, {"l_per_rad_per_s", "1"}}}}}),
                 ncf::ParseError);
    EXPECT_THROW(materials_from_json(json{{"materials", {{{"kind", "direct_L"}, {"l_per_rad_per_s", 1.0}}}}}),
                 ncf::ParseError);
}

TEST(Catalog, FileEntriesOverlayBuiltins)
{
    const auto path = write_temp(
        "overlay.json",
        R"({"materials": [{"name": "Au", "kind": "direct_L", "l_per_rad_per_s": 5e-19},
                          {"name": "new", "kind": "direct_L", "l_per_rad_per_s": 1e-17}]})");
    const auto cat = catalog(path);
    EXPECT_EQ(cat.size(), 7u);
    EXPECT_EQ(resolve_L(*find(cat, "Au")), 5e-19);
    EXPECT_EQ(cat[0].name, "Au");
    EXPECT_EQ(cat.back().name, "new");
    EXPECT_EQ(catalog(std::nullopt), builtin_materials());
    std::filesystem::remove(path);
}

TEST(ModelForLimit, ConductorsGetDrude)
{
    const auto all = builtin_materials();
    const auto m = model_for_limit(*find(all, "graphite"));
    ASSERT_TRUE(m.has_value());
    EXPECT_TRUE(m->is_conductor());
    EXPECT_LT(rel(ncf::dielectric::l_coefficient_numeric(*m), 1.38e-16), 0.01);
    EXPECT_FALSE(model_for_limit(*find(all, "quartz-o")).has_value());
}
