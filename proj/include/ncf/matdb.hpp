#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncf/constants.hpp"
#include "ncf/dielectric.hpp"
#include "ncf/errors.hpp"

namespace ncf::matdb {

enum class MaterialKind
{
    conductor,
    insulator_model,
    direct_L
};

inline const char* to_string(MaterialKind k)
{
    switch (k)
    {
    case MaterialKind::conductor: return "conductor";
    case MaterialKind::insulator_model: return "insulator_model";
    case MaterialKind::direct_L: return "direct_L";
    }
    return "?";
}

inline std::optional<MaterialKind> kind_from_string(const std::string& s)
{
    if (s == "conductor") return MaterialKind::conductor;
    if (s == "insulator_model") return MaterialKind::insulator_model;
    if (s == "direct_L") return MaterialKind::direct_L;
    return std::nullopt;
}

/// Exactly one of sigma_dc / model / l_value is populated, selected by kind.
struct Material
{
    std::string name;
    MaterialKind kind = MaterialKind::direct_L;
    std::optional<double> sigma_dc;  // 1/(Ohm m)
    std::optional<dielectric::DielectricModel> model;
    std::optional<double> l_value;   // s/rad
    std::string notes;
    // Figure of merit quoted by an external source for this material, if any;
    // compared against the computed value and reported when they disagree.
    std::optional<double> reference_figure_of_merit;

    static Material conductor(std::string name, double sigma, std::string notes = {})
    {
        Material m;
        m.name = std::move(name);
        m.kind = MaterialKind::conductor;
        m.sigma_dc = sigma;
        m.notes = std::move(notes);
        return m;
    }

    static Material direct(std::string name, double L, std::string notes = {})
    {
        Material m;
        m.name = std::move(name);
        m.kind = MaterialKind::direct_L;
        m.l_value = L;
        m.notes = std::move(notes);
        return m;
    }

    static Material insulator(std::string name, dielectric::DielectricModel model,
                              std::string notes = {})
    {
        Material m;
        m.name = std::move(name);
        m.kind = MaterialKind::insulator_model;
        m.model = std::move(model);
        m.notes = std::move(notes);
        return m;
    }

    bool operator==(const Material&) const = default;
};

class UnresolvableMaterial : public Error
{
  public:
    using Error::Error;
};

inline std::vector<std::string> violations(const Material& m)
{
    std::vector<std::string> out;
    const std::string tag = "material '" + m.name + "': ";
    if (m.name.empty()) out.push_back("material with empty name");

    const int populated = int(m.sigma_dc.has_value()) + int(m.model.has_value())
                          + int(m.l_value.has_value());
    if (populated != 1)
    {
        out.push_back(tag + "exactly one of sigma_dc, model, l_value must be set (found "
                      + std::to_string(populated) + ")");
    }
    switch (m.kind)
    {
    case MaterialKind::conductor:
        if (!m.sigma_dc) out.push_back(tag + "kind conductor requires sigma_dc");
        break;
    case MaterialKind::insulator_model:
        if (!m.model) out.push_back(tag + "kind insulator_model requires a model");
        break;
    case MaterialKind::direct_L:
        if (!m.l_value) out.push_back(tag + "kind direct_L requires l_value");
        break;
    }
    if (m.sigma_dc && !(std::isfinite(*m.sigma_dc) && *m.sigma_dc > 0))
    {
        out.push_back(tag + "sigma_dc must be finite and > 0");
    }
    if (m.l_value && !(std::isfinite(*m.l_value) && *m.l_value >= 0))
    {
        out.push_back(tag + "l_value must be finite and >= 0");
    }
    if (m.reference_figure_of_merit && !std::isfinite(*m.reference_figure_of_merit))
    {
        out.push_back(tag + "reference_figure_of_merit must be finite");
    }
    return out;
}

inline void validate(std::span<const Material> materials)
{
    std::vector<std::string> all;
    std::set<std::string> seen;
    for (const auto& m : materials)
    {
        auto v = violations(m);
        all.insert(all.end(), v.begin(), v.end());
        if (!seen.insert(m.name).second)
        {
            all.push_back("duplicate material name '" + m.name + "'");
        }
    }
    if (!all.empty()) throw ValidationError(std::move(all));
}

/// Low-frequency loss coefficient of a material, by kind:
/// conductor 2 eps0 / sigma, model via the closed form, direct value as is.
inline double resolve_L(const Material& m)
{
    switch (m.kind)
    {
    case MaterialKind::conductor:
        if (m.sigma_dc && *m.sigma_dc > 0 && !m.model && !m.l_value)
        {
            return 2.0 * constants().eps0 / *m.sigma_dc;
        }
        break;
    case MaterialKind::insulator_model:
        if (m.model && !m.sigma_dc && !m.l_value)
        {
            return dielectric::l_coefficient_closed(*m.model);
        }
        break;
    case MaterialKind::direct_L:
        if (m.l_value && *m.l_value >= 0 && !m.sigma_dc && !m.model)
        {
            return *m.l_value;
        }
        break;
    }
    throw UnresolvableMaterial("material '" + m.name + "' (kind " + to_string(m.kind)
                               + ") does not carry the matching field");
}

/// A dielectric model usable for the numeric w -> 0 limit, when the material has one.
/// Conductors get a Drude model at the nominal relaxation rate.
inline std::optional<dielectric::DielectricModel>
model_for_limit(const Material& m, double relaxation_rate = dielectric::nominal_drude_relaxation)
{
    if (m.kind == MaterialKind::insulator_model && m.model) return m.model;
    if (m.kind == MaterialKind::conductor && m.sigma_dc)
    {
        return dielectric::DielectricModel::drude_from_conductivity(*m.sigma_dc, relaxation_rate,
                                                                   m.name);
    }
    return std::nullopt;
}

inline std::vector<Material> builtin_materials()
{
    const std::string metal_note =
        "room-temperature DC conductivity, average of manufacturer data for commercial samples";
    std::vector<Material> out{
        Material::conductor("Au", 2.30e7, metal_note),
        Material::conductor("V", 5.08e6, metal_note + "; single crystals available"),
        Material::conductor("Ti", 1.27e6, metal_note),
        Material::conductor("graphite", 1.28e5,
                            metal_note + "; basal plane parallel to the slab surface"),
        Material::direct("quartz-o", 1.40e-17, "alpha-quartz, ordinary axis"),
        Material::direct("quartz-e", 2.14e-17, "alpha-quartz, extraordinary axis"),
    };
    out[4].reference_figure_of_merit = 9.04e3;
    out[5].reference_figure_of_merit = 1.37e4;
    return out;
}

inline const Material* find(std::span<const Material> materials, const std::string& name)
{
    auto it = std::find_if(materials.begin(), materials.end(),
                           [&](const Material& m) { return m.name == name; });
    return it == materials.end() ? nullptr : &*it;
}

// JSON file format:
// {"materials": [{"name": ..., "kind": "conductor" | "insulator_model" | "direct_L",
//                 "sigma_dc_per_ohm_m": ..., "model": {...}, "l_per_rad_per_s": ...,
//                 "notes": ..., "reference_figure_of_merit": ...}]}

inline nlohmann::json to_json(const Material& m)
{
    nlohmann::json j{{"name", m.name}, {"kind", to_string(m.kind)}};
    if (m.sigma_dc) j["sigma_dc_per_ohm_m"] = *m.sigma_dc;
    if (m.model) j["model"] = dielectric::to_json(*m.model);
    if (m.l_value) j["l_per_rad_per_s"] = *m.l_value;
    if (!m.notes.empty()) j["notes"] = m.notes;
    if (m.reference_figure_of_merit) j["reference_figure_of_merit"] = *m.reference_figure_of_merit;
    return j;
}

inline nlohmann::json to_json(std::span<const Material> materials)
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto& m : materials) list.push_back(to_json(m));
    return {{"materials", list}};
}

inline Material material_from_json(const nlohmann::json& j, const std::string& where)
{
    static const std::set<std::string> known{"name",  "kind",  "sigma_dc_per_ohm_m",
                                             "model", "l_per_rad_per_s", "notes",
                                             "reference_figure_of_merit"};
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
    {
        if (!known.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
    }

    auto string_field = [&](const char* key, bool required) -> std::string {
        auto it = j.find(key);
        if (it == j.end())
        {
            if (required) throw ParseError(where + ": missing field '" + key + "'");
            return {};
        }
        if (!it->is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
        return it->get<std::string>();
    };
    auto number_field = [&](const char* key) -> std::optional<double> {
        auto it = j.find(key);
        if (it == j.end()) return std::nullopt;
        if (!it->is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
        return it->get<double>();
    };

    Material m;
    m.name = string_field("name", true);
    const std::string kind = string_field("kind", true);
    auto k = kind_from_string(kind);
    if (!k) throw ParseError(where + ": unknown kind '" + kind + "'");
    m.kind = *k;
    m.sigma_dc = number_field("sigma_dc_per_ohm_m");
    m.l_value = number_field("l_per_rad_per_s");
    if (auto it = j.find("model"); it != j.end())
    {
        m.model = dielectric::model_from_json(*it, where + ".model");
    }
    m.notes = string_field("notes", false);
    m.reference_figure_of_merit = number_field("reference_figure_of_merit");
    return m;
}

inline std::vector<Material> materials_from_json(const nlohmann::json& j,
                                                 const std::string& source = "materials")
{
    if (!j.is_object() || !j.contains("materials") || !j["materials"].is_array())
    {
        throw ParseError(source + ": expected an object with a 'materials' array");
    }
    std::vector<Material> out;
    const auto& list = j["materials"];
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        out.push_back(material_from_json(list[i], source + ": materials[" + std::to_string(i) + "]"));
    }
    validate(out);
    return out;
}

inline std::vector<Material> load_materials(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ParseError(path + ": " + e.what());
    }
    return materials_from_json(j, path);
}

inline void save_materials(const std::string& path, std::span<const Material> materials)
{
    validate(materials);
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open file for writing");
    out << to_json(materials).dump(2) << '\n';
}

/// Builtins overlaid by the entries of an optional file (file entries win on name clashes).
inline std::vector<Material> catalog(const std::optional<std::string>& path)
{
    auto out = builtin_materials();
    if (!path) return out;
    for (auto& m : load_materials(*path))
    {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Material& b) { return b.name == m.name; });
        if (it != out.end())
            *it = std::move(m);
        else
            out.push_back(std::move(m));
    }
    return out;
}

} // namespace ncf::matdb
