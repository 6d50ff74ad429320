#ifndef DIMWIT_PHOTONIC_HPP_
#define DIMWIT_PHOTONIC_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dimwit/counts.hpp"
#include "dimwit/witness.hpp"

namespace dimwit
{

// Signal-photon basis order: |H,+1>, |H,-1>, |V,+1>, |V,-1>.
inline constexpr int kHPlus = 0;
inline constexpr int kHMinus = 1;
inline constexpr int kVPlus = 2;
inline constexpr int kVMinus = 3;
inline constexpr int kSignalDim = 4;

/// Default group-velocity-mismatch times crystal length, in femtoseconds.
inline constexpr double kDefaultDl = 510.0;

/// I4 of the ideal quart ensemble with its preset measurements.
inline constexpr double kQuartIdealI4 = 9.0;

/// Preset polarizer angle of the qubit and qutrit ensembles, degrees.
inline constexpr double kPresetPhiDeg = 22.5;

struct PhysicalParams
{
    double dl = kDefaultDl;  ///< D*L in fs
    double tau = 0.0;        ///< polarization-dependent delay in fs
};

inline void validate(const PhysicalParams& p)
{
    if (!(p.dl > 0.0))
        throw ValidationError("PhysicalParams: dl must be > 0");
}

inline double deg_to_rad(double deg)
{
    return deg * std::numbers::pi / 180.0;
}

inline double triangle(double t)
{
    return std::max(1.0 - std::abs(t), 0.0);
}

/// gamma(tau) = tri((tau - DL/2) / (DL/2))
inline double gamma_of_delay(const PhysicalParams& params)
{
    validate(params);
    const double half = 0.5 * params.dl;
    return triangle((params.tau - half) / half);
}

/// Uniform grid over u = DL*Omega/2 in [-half_width, half_width].
struct QuadratureGrid
{
    double half_width = 2000.0;
    int intervals = 400000;  ///< must be even (composite Simpson)
};

struct QuadratureResult
{
    Complex value;
    /// truncation bound plus the Simpson/half-grid Richardson estimate
    double error_estimate = 0.0;

    bool within(double tol) const { return error_estimate <= tol; }
};

/** @brief Direct quadrature of the coherence integral
 *      (DL / 2 pi) * integral dOmega sinc^2(DL Omega / 2) exp(i Omega (2 tau - DL)).
 *
 *  Substituting u = DL Omega / 2 leaves (1/pi) * integral du sinc^2(u) exp(i s u)
 *  with s = 2 (2 tau - DL) / DL. The tail beyond |u| = U is bounded by 2 / (pi U).
 */
inline QuadratureResult gamma_quadrature_oracle(const PhysicalParams& params,
                                                const QuadratureGrid& grid = {})
{
    validate(params);
    if (grid.intervals < 2 || grid.intervals % 2 != 0 || !(grid.half_width > 0.0))
        throw ValidationError("QuadratureGrid: need an even interval count >= 2 and half_width > 0");

    const double s = 2.0 * (2.0 * params.tau - params.dl) / params.dl;
    const double u0 = -grid.half_width;
    const double h = 2.0 * grid.half_width / grid.intervals;

    auto integrand = [s](double u) {
        const double sinc = u == 0.0 ? 1.0 : std::sin(u) / u;
        return sinc * sinc * std::exp(Complex(0.0, s * u));
    };

    Complex fine = 0.0;
    Complex coarse = 0.0;  // Simpson on the doubled step, reusing even nodes
    const int half_intervals = grid.intervals / 2;
    for (int i = 0; i <= grid.intervals; ++i)
    {
        const Complex f = integrand(u0 + i * h);
        const double wf = (i == 0 || i == grid.intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        fine += wf * f;
        if (i % 2 == 0)
        {
            const int j = i / 2;
            const double wc = (j == 0 || j == half_intervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            if (half_intervals % 2 == 0)
                coarse += wc * f;
        }
    }
    fine *= h / 3.0;
    coarse *= 2.0 * h / 3.0;

    QuadratureResult r;
    r.value = fine / std::numbers::pi;
    const double richardson = half_intervals % 2 == 0
                                  ? std::abs(fine - coarse) / (15.0 * std::numbers::pi)
                                  : 0.0;
    r.error_estimate = 2.0 / (std::numbers::pi * grid.half_width) + richardson;
    return r;
}

/// Idler projection and polarizer setting that heralds one signal preparation.
struct PreparationSetting
{
    int alpha = 1;     ///< 1: signal carries m = +1, 0: signal carries m = -1
    double phi = 0.0;  ///< polarizer angle in degrees
};

/** Signal density matrix of one heralded preparation.
 *
 *  alpha = 1 populates the {|H,+1>, |V,+1>} block, alpha = 0 the
 *  {|H,-1>, |V,-1>} block, with diagonal cos^2(phi), sin^2(phi) and
 *  coherence gamma * sin(2 phi) / 2 (times `visibility`).
 */
inline DensityMatrix prepare_signal_state(const PreparationSetting& setting, Complex gamma,
                                          double visibility = 1.0)
{
    if (setting.alpha != 0 && setting.alpha != 1)
        throw ValidationError("PreparationSetting: alpha must be 0 or 1");
    if (std::abs(gamma) > 1.0 + 1e-15)
        throw ValidationError("prepare_signal_state: |gamma| exceeds 1");
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw ValidationError("prepare_signal_state: visibility must lie in [0, 1]");

    const double phi = deg_to_rad(setting.phi);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const int h = setting.alpha == 1 ? kHPlus : kHMinus;
    const int v = setting.alpha == 1 ? kVPlus : kVMinus;

    CMatrix rho = CMatrix::Zero(kSignalDim, kSignalDim);
    rho(h, h) = c * c;
    rho(v, v) = s * s;
    rho(h, v) = visibility * gamma * std::sin(2.0 * phi) / 2.0;
    rho(v, h) = std::conj(rho(h, v));
    return DensityMatrix(std::move(rho));
}

/// 1 - (1 - |gamma|^2)/2 * sin^2(2 phi), valid for alpha in {0, 1}.
inline double purity_formula(double phi_deg, double gamma)
{
    const double s2 = std::sin(2.0 * deg_to_rad(phi_deg));
    return 1.0 - 0.5 * (1.0 - gamma * gamma) * s2 * s2;
}

/// tr(rho^2)
inline double purity_of(const DensityMatrix& rho)
{
    return detail::real_trace_product(rho.matrix(), rho.matrix());
}

enum class ScenarioKind
{
    qubit,
    qutrit,
    quart
};

inline const char* to_string(ScenarioKind k) noexcept
{
    switch (k)
    {
    case ScenarioKind::qubit:
        return "qubit";
    case ScenarioKind::qutrit:
        return "qutrit";
    case ScenarioKind::quart:
        return "quart";
    }
    return "?";
}

/// A preset ensemble plus how its coherence is set. "bit" and "trit" name the
/// qubit and qutrit presets with gamma forced to 0.
struct Scenario
{
    ScenarioKind kind = ScenarioKind::qutrit;
    /// empty: gamma follows the delay; otherwise this value is used everywhere
    std::optional<double> forced_gamma;

    static Scenario parse(std::string_view name)
    {
        if (name == "qubit")
            return {ScenarioKind::qubit, std::nullopt};
        if (name == "qutrit")
            return {ScenarioKind::qutrit, std::nullopt};
        if (name == "quart")
            return {ScenarioKind::quart, std::nullopt};
        if (name == "bit")
            return {ScenarioKind::qubit, 0.0};
        if (name == "trit")
            return {ScenarioKind::qutrit, 0.0};
        throw ValidationError("unknown scenario '" + std::string(name) + "'");
    }
};

/// The four preparation settings of a preset, x = 1..4 in order.
inline std::vector<PreparationSetting> preparation_settings(ScenarioKind kind,
                                                            double phi_deg = kPresetPhiDeg)
{
    switch (kind)
    {
    case ScenarioKind::qubit:
        return {{1, phi_deg}, {1, -phi_deg}, {1, 0.0}, {1, 90.0}};
    case ScenarioKind::qutrit:
        return {{1, phi_deg}, {1, -phi_deg}, {0, 0.0}, {1, 90.0}};
    case ScenarioKind::quart:
        return {{1, 0.0}, {0, 0.0}, {1, 90.0}, {0, 90.0}};
    }
    return {};
}

inline std::vector<DensityMatrix> ensemble_preset(ScenarioKind kind, double gamma,
                                                  double phi_deg = kPresetPhiDeg,
                                                  double visibility = 1.0)
{
    std::vector<DensityMatrix> out;
    for (const auto& s : preparation_settings(kind, phi_deg))
        out.push_back(prepare_signal_state(s, gamma, visibility));
    return out;
}

inline std::vector<DensityMatrix> ensemble_preset(const Scenario& scenario, double gamma,
                                                  double phi_deg = kPresetPhiDeg,
                                                  double visibility = 1.0)
{
    return ensemble_preset(scenario.kind, scenario.forced_gamma.value_or(gamma), phi_deg, visibility);
}

namespace detail
{
inline Observable diagonal_observable(double a, double b, double c, double d)
{
    CMatrix m = CMatrix::Zero(kSignalDim, kSignalDim);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return Observable(std::move(m));
}
} // namespace detail

/// Three dichotomic measurements of a preset, y = 1..3 in order.
inline std::vector<Observable> measurement_preset(ScenarioKind kind)
{
    const Observable hv = detail::diagonal_observable(+1, +1, -1, -1);
    const Observable oam = detail::diagonal_observable(+1, -1, +1, -1);
    if (kind == ScenarioKind::quart)
        return {detail::diagonal_observable(+1, +1, +1, -1), hv, oam};

    // +-45 degree polarization: couples |H,m> and |V,m> for each m
    CMatrix diag45 = CMatrix::Zero(kSignalDim, kSignalDim);
    diag45(kHPlus, kVPlus) = 1.0;
    diag45(kVPlus, kHPlus) = 1.0;
    diag45(kHMinus, kVMinus) = 1.0;
    diag45(kVMinus, kHMinus) = 1.0;
    return {hv, oam, Observable(std::move(diag45))};
}

/// Closed-form I4 of the qubit / qutrit presets at polarizer angle phi.
inline double analytic_i4(ScenarioKind kind, double phi_deg, double gamma)
{
    const double offset = kind == ScenarioKind::qutrit ? 5.0 : 3.0;
    if (kind == ScenarioKind::quart)
        throw ValidationError("analytic_i4: the quart value is the constant kQuartIdealI4");
    const double two_phi = 2.0 * deg_to_rad(phi_deg);
    return offset + 2.0 * std::cos(two_phi) + 2.0 * gamma * std::sin(two_phi);
}

/// max over phi of analytic_i4, attained at tan(2 phi) = gamma
inline double analytic_i4_max(ScenarioKind kind, double gamma)
{
    if (kind == ScenarioKind::quart)
        return kQuartIdealI4;
    const double offset = kind == ScenarioKind::qutrit ? 5.0 : 3.0;
    return offset + 2.0 * std::sqrt(1.0 + gamma * gamma);
}

struct ScanPoint
{
    double delta = 0.0;  ///< tau - DL/2, fs
    double gamma = 0.0;
    double i4 = 0.0;
};

struct ScanOptions
{
    double phi_deg = kPresetPhiDeg;
    double visibility = 1.0;
};

/// I4 of a preset, computed through the matrix pipeline.
inline double preset_i4(const Scenario& scenario, double gamma, const ScanOptions& opts = {})
{
    const auto states = ensemble_preset(scenario, gamma, opts.phi_deg, opts.visibility);
    const auto obs = measurement_preset(scenario.kind);
    return eval_witness(i4_spec(), probs_from_quantum(states, obs));
}

/// Witness value along a delay grid; x-axis delta = tau - DL/2.
inline std::vector<ScanPoint> scan_delay(const Scenario& scenario, double dl,
                                         std::span<const double> tau_grid,
                                         const ScanOptions& opts = {})
{
    std::vector<ScanPoint> curve;
    curve.reserve(tau_grid.size());
    for (double tau : tau_grid)
    {
        if (!std::isfinite(tau))
            throw ValidationError("scan_delay: non-finite delay");
        const double g = scenario.forced_gamma.value_or(gamma_of_delay({dl, tau}));
        curve.push_back({tau - 0.5 * dl, g, preset_i4(scenario, g, opts)});
    }
    return curve;
}

/// `steps` evenly spaced points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int steps)
{
    if (steps < 1)
        throw ValidationError("linspace: steps must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    return out;
}

/// Binomial sampling of a dichotomic table. Setting (x, y) draws from its own
/// stream seeded by (seed, x, y), so the record does not depend on visit order.
inline CountsRecord simulate_counts(const ProbabilityTable& p, std::uint64_t shots_per_setting,
                                    std::uint64_t seed)
{
    if (p.outcomes() != 2)
        throw ShapeError("simulate_counts: table is not dichotomic");
    if (shots_per_setting < 1)
        throw ValidationError("simulate_counts: shots must be >= 1");
    CountsRecord rec;
    rec.n = p.preparations();
    rec.m = p.measurements();
    rec.k = 2;
    const std::size_t cells = static_cast<std::size_t>(rec.n) * rec.m;
    rec.shots.assign(cells, shots_per_setting);
    rec.counts.assign(2 * cells, 0);
    for (int x = 0; x < rec.n; ++x)
        for (int y = 0; y < rec.m; ++y)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
            std::mt19937_64 rng(seq);
            const double prob = std::clamp(p(kPlus, x, y), 0.0, 1.0);
            std::binomial_distribution<std::uint64_t> draw(shots_per_setting, prob);
            const std::uint64_t plus = draw(rng);
            const std::size_t i = static_cast<std::size_t>(x) * rec.m + y;
            rec.counts[i] = plus;
            rec.counts[cells + i] = shots_per_setting - plus;
        }
    return rec;
}

} // namespace dimwit

#endif // DIMWIT_PHOTONIC_HPP_
