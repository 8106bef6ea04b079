#pragma once

// Generalized Drude-Lorentz permittivity
//
//   eps(w) = 1 + sum_n (a_n - i b_n w) / (w_n^2 - w^2 - i gamma_n w)
//
// and the low-frequency loss coefficient L = lim_{w->0} Im[(eps-1)/(eps+1)]/w
// that sets the strength of non-contact friction. A term with w_n = 0 is the
// Drude (conduction) term, with a_0 = w_p^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncf/constants.hpp"
#include "ncf/errors.hpp"

namespace ncf::dielectric {

using Complex = std::complex<double>;

/// Relaxation rate assumed when a Drude model has to be built from a DC
/// conductivity alone. L does not depend on it; only the frequency scale of
/// the numeric limit does.
inline constexpr double nominal_drude_relaxation = 1e14;  // rad/s

struct ResonanceTerm
{
    double omega_n = 0;  // rad/s; 0 marks the Drude term
    double a_n = 0;      // (rad/s)^2
    double b_n = 0;      // rad/s
    double gamma_n = 0;  // rad/s

    static ResonanceTerm drude(double plasma_frequency, double relaxation_rate)
    {
        return {0.0, plasma_frequency * plasma_frequency, 0.0, relaxation_rate};
    }

    /// Lorentz profile written with the static strength and the modified width gamma'.
    static ResonanceTerm lorentz(double omega_n, double delta_eps, double gamma_n,
                                 double gamma_prime = 0.0)
    {
        return {omega_n, delta_eps * omega_n * omega_n, delta_eps * gamma_prime, gamma_n};
    }

    bool is_drude() const noexcept { return omega_n == 0.0; }

    /// a_n / w_n^2; infinite for the Drude term.
    double delta_eps() const noexcept
    {
        return is_drude() ? std::numeric_limits<double>::infinity()
                          : a_n / (omega_n * omega_n);
    }

    /// b_n / delta_eps; zero when the term has no strength.
    double gamma_prime() const noexcept
    {
        const double de = delta_eps();
        return (de == 0.0 || std::isinf(de)) ? 0.0 : b_n / de;
    }

    bool operator==(const ResonanceTerm&) const = default;
};

inline std::vector<std::string> term_violations(std::span<const ResonanceTerm> terms)
{
    std::vector<std::string> out;
    int drude_count = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
    {
        const auto& t = terms[i];
        const std::string tag = "term " + std::to_string(i) + ": ";
        if (!std::isfinite(t.omega_n) || !std::isfinite(t.a_n) || !std::isfinite(t.b_n)
            || !std::isfinite(t.gamma_n))
        {
            out.push_back(tag + "all parameters must be finite");
            continue;
        }
        if (t.omega_n < 0) out.push_back(tag + "omega_n must be >= 0");
        if (t.a_n < 0) out.push_back(tag + "a_n must be >= 0");
        if (t.gamma_n < 0) out.push_back(tag + "gamma_n must be >= 0");
        if (t.is_drude())
        {
            ++drude_count;
            if (t.a_n <= 0) out.push_back(tag + "Drude term (omega_n = 0) needs a_n > 0");
        }
    }
    if (drude_count > 1)
    {
        out.push_back("at most one term may have omega_n = 0, found "
                      + std::to_string(drude_count));
    }
    return out;
}

/// Immutable list of resonance terms. An empty model is vacuum.
class DielectricModel
{
  public:
    DielectricModel() = default;

    explicit DielectricModel(std::vector<ResonanceTerm> terms, std::string name = {})
        : name_(std::move(name)), terms_(std::move(terms))
    {
        if (auto v = term_violations(terms_); !v.empty())
        {
            throw ValidationError(std::move(v));
        }
    }

    /// Drude conductor with sigma = eps0 w_p^2 / gamma0.
    static DielectricModel drude_from_conductivity(double sigma,
                                                   double relaxation_rate = nominal_drude_relaxation,
                                                   std::string name = {})
    {
        if (!(sigma > 0) || !std::isfinite(sigma))
        {
            throw DomainError("drude_from_conductivity: sigma must be finite and > 0");
        }
        if (!(relaxation_rate > 0) || !std::isfinite(relaxation_rate))
        {
            throw DomainError("drude_from_conductivity: relaxation rate must be finite and > 0");
        }
        const double a0 = sigma * relaxation_rate / constants().eps0;
        return DielectricModel({ResonanceTerm{0.0, a0, 0.0, relaxation_rate}}, std::move(name));
    }

    const std::string& name() const noexcept { return name_; }
    std::span<const ResonanceTerm> terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    const ResonanceTerm* drude_term() const noexcept
    {
        auto it = std::find_if(terms_.begin(), terms_.end(),
                               [](const ResonanceTerm& t) { return t.is_drude(); });
        return it == terms_.end() ? nullptr : &*it;
    }

    bool is_conductor() const noexcept { return drude_term() != nullptr; }

    /// eps(0) = 1 + sum delta_eps_n; undefined for conductors.
    double static_permittivity() const
    {
        if (is_conductor())
        {
            throw PoleError("static_permittivity: conductor models diverge at w = 0");
        }
        double eps = 1.0;
        for (const auto& t : terms_) eps += t.delta_eps();
        return eps;
    }

    bool operator==(const DielectricModel&) const = default;

  private:
    std::string name_;
    std::vector<ResonanceTerm> terms_;
};

inline Complex permittivity(const DielectricModel& model, double omega)
{
    if (!std::isfinite(omega))
    {
        throw DomainError("permittivity: frequency must be finite");
    }
    if (omega == 0.0 && model.is_conductor())
    {
        throw PoleError("permittivity: Drude term has a pole at w = 0");
    }
    Complex eps{1.0, 0.0};
    for (const auto& t : model.terms())
    {
        const Complex num{t.a_n, -t.b_n * omega};
        const Complex den{t.omega_n * t.omega_n - omega * omega, -t.gamma_n * omega};
        eps += num / den;
    }
    return eps;
}

/// (eps - 1)/(eps + 1), the reflection factor of the surface.
inline Complex surface_response(const DielectricModel& model, double omega)
{
    const Complex eps = permittivity(model, omega);
    const Complex den = eps + 1.0;
    if (den == Complex{0.0, 0.0})
    {
        throw PoleError("surface_response: eps(w) = -1 (surface plasmon pole)");
    }
    return (eps - 1.0) / den;
}

/// L for a single Lorentz resonance without the b term: 2 a gamma / (a + 2 w_n^2)^2.
inline double l_coefficient_single_resonance(const ResonanceTerm& term)
{
    if (term.is_drude() || term.b_n != 0.0)
    {
        throw DomainError("l_coefficient_single_resonance: needs omega_n > 0 and b_n = 0");
    }
    const double s = term.a_n + 2.0 * term.omega_n * term.omega_n;
    return 2.0 * term.a_n * term.gamma_n / (s * s);
}

/// Closed-form L. Conductors (any model with a Drude term): 2 gamma0 / w_p^2.
/// Insulators: sum_n 2 (delta_eps_n gamma_n - b_n) / w_n^2 / (2 + sum_m delta_eps_m)^2,
/// i.e. 2 delta_eps_n (gamma_n - gamma'_n) in the modified-Lorentz notation.
inline double l_coefficient_closed(const DielectricModel& model)
{
    if (const auto* d = model.drude_term())
    {
        return 2.0 * d->gamma_n / d->a_n;
    }
    double total_strength = 0.0;
    double loss = 0.0;
    for (const auto& t : model.terms())
    {
        const double w2 = t.omega_n * t.omega_n;
        const double de = t.a_n / w2;
        total_strength += de;
        loss += 2.0 * (de * t.gamma_n - t.b_n) / w2;
    }
    const double s = 2.0 + total_strength;
    return loss / (s * s);
}

struct LimitEstimate
{
    double value = 0;
    double last_relative_change = 0;  // between the two finest extrapolants
    double finest_frequency = 0;      // rad/s
};

inline constexpr int numeric_limit_levels = 20;
inline constexpr double numeric_limit_tolerance = 1e-3;

/// Frequency below which Im[(eps-1)/(eps+1)]/w is expected to be smooth:
/// a hundredth of the smallest dynamical scale in the model.
inline double limit_reference_frequency(const DielectricModel& model)
{
    double scale = std::numeric_limits<double>::infinity();
    for (const auto& t : model.terms())
    {
        if (t.is_drude())
        {
            if (t.gamma_n > 0)
            {
                scale = std::min(scale, t.gamma_n);
                scale = std::min(scale, t.a_n / (2.0 * t.gamma_n));
            }
            else
            {
                scale = std::min(scale, std::sqrt(t.a_n));
            }
        }
        else
        {
            scale = std::min(scale, t.omega_n);
        }
    }
    return std::isinf(scale) ? 1.0 : scale / 100.0;
}

/// Numerical w -> 0 limit: evaluates Im[(eps-1)/(eps+1)]/w at
/// w_k = w_ref 2^-k, k = 0..20, and Richardson-extrapolates in w^2 (the
/// ratio is even in w for real-coefficient models).
inline LimitEstimate l_coefficient_numeric_detail(const DielectricModel& model)
{
    const double w_ref = limit_reference_frequency(model);
    auto sample = [&](double w) { return surface_response(model, w).imag() / w; };

    double w = w_ref;
    double previous = sample(w);
    double extrapolant = 0;
    double previous_extrapolant = 0;
    for (int k = 1; k <= numeric_limit_levels; ++k)
    {
        w *= 0.5;
        const double current = sample(w);
        previous_extrapolant = extrapolant;
        extrapolant = (4.0 * current - previous) / 3.0;
        previous = current;
    }

    LimitEstimate est;
    est.value = extrapolant;
    est.finest_frequency = w;
    const double diff = std::abs(extrapolant - previous_extrapolant);
    // rounding floor of Im g / w at the finest sample; a lossless model
    // leaves nothing above it
    const double noise = 64.0 * std::numeric_limits<double>::epsilon()
                         * std::abs(surface_response(model, w)) / w;
    if (std::abs(extrapolant) <= noise && diff <= noise)
    {
        est.value = 0.0;
        est.last_relative_change = 0.0;
        return est;
    }
    est.last_relative_change = (extrapolant == 0.0) ? 1.0 : diff / std::abs(extrapolant);
    if (!std::isfinite(est.value) || est.last_relative_change > numeric_limit_tolerance)
    {
        throw NumericalError("l_coefficient_numeric: limit did not converge (last relative change "
                             + std::to_string(est.last_relative_change) + ")");
    }
    return est;
}

inline double l_coefficient_numeric(const DielectricModel& model)
{
    return l_coefficient_numeric_detail(model).value;
}

struct SpectralLine
{
    double energy;               // J, excitation energy E_n0
    double width;                // J, Gamma_n
    double oscillator_strength;  // f_n0, such that N_V f / (eps0 E^2) is dimensionless
};

/// Insulator model of a dilute medium from its spectral lines:
/// w_n = E/hbar, gamma_n = Gamma/hbar, gamma'_n = 0, delta_eps_n = N_V f / (eps0 E^2).
inline DielectricModel from_spectroscopy(std::span<const SpectralLine> lines,
                                         double number_density, std::string name = {})
{
    if (!std::isfinite(number_density) || number_density < 0)
    {
        throw DomainError("from_spectroscopy: number density must be finite and >= 0");
    }
    const auto& k = constants();
    std::vector<ResonanceTerm> terms;
    terms.reserve(lines.size());
    for (const auto& line : lines)
    {
        if (!(line.energy > 0) || !std::isfinite(line.energy))
        {
            throw DomainError("from_spectroscopy: line energy must be > 0");
        }
        if (!(line.width >= 0) || !std::isfinite(line.width))
        {
            throw DomainError("from_spectroscopy: line width must be >= 0");
        }
        if (!(line.oscillator_strength > 0) || !std::isfinite(line.oscillator_strength))
        {
            throw DomainError("from_spectroscopy: oscillator strength must be > 0");
        }
        const double de = number_density * line.oscillator_strength
                          / (k.eps0 * line.energy * line.energy);
        terms.push_back(ResonanceTerm::lorentz(line.energy / k.hbar, de, line.width / k.hbar));
    }
    return DielectricModel(std::move(terms), std::move(name));
}

// JSON: {"name": str, "terms": [{"omega_n", "a_n", "b_n", "gamma_n"}]}, SI units.

inline nlohmann::json to_json(const DielectricModel& model)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : model.terms())
    {
        terms.push_back({{"omega_n", t.omega_n}, {"a_n", t.a_n}, {"b_n", t.b_n},
                         {"gamma_n", t.gamma_n}});
    }
    return {{"name", model.name()}, {"terms", terms}};
}

namespace detail {
inline double number_field(const nlohmann::json& obj, const char* key, const std::string& where,
                           std::optional<double> fallback = std::nullopt)
{
    auto it = obj.find(key);
    if (it == obj.end())
    {
        if (fallback) return *fallback;
        throw ParseError(where + ": missing field '" + key + "'");
    }
    if (!it->is_number())
    {
        throw ParseError(where + ": field '" + key + "' must be a number");
    }
    return it->get<double>();
}
} // namespace detail

inline DielectricModel model_from_json(const nlohmann::json& j, const std::string& where = "model")
{
    if (!j.is_object())
    {
        throw ParseError(where + ": expected an object");
    }
    std::string name;
    if (auto it = j.find("name"); it != j.end())
    {
        if (!it->is_string()) throw ParseError(where + ": field 'name' must be a string");
        name = it->get<std::string>();
    }
    auto terms_it = j.find("terms");
    if (terms_it == j.end() || !terms_it->is_array())
    {
        throw ParseError(where + ": field 'terms' must be an array");
    }
    std::vector<ResonanceTerm> terms;
    for (std::size_t i = 0; i < terms_it->size(); ++i)
    {
        const auto& t = (*terms_it)[i];
        const std::string at = where + ".terms[" + std::to_string(i) + "]";
        if (!t.is_object()) throw ParseError(at + ": expected an object");
        terms.push_back({detail::number_field(t, "omega_n", at),
                         detail::number_field(t, "a_n", at),
                         detail::number_field(t, "b_n", at, 0.0),
                         detail::number_field(t, "gamma_n", at)});
    }
    return DielectricModel(std::move(terms), std::move(name));
}

inline DielectricModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ParseError(path + ": cannot open file");
    }
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ParseError(path + ": " + e.what());
    }
    return model_from_json(j, path);
}

} // namespace ncf::dielectric
