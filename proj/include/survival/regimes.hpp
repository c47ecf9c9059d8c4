// regimes.hpp: the three decay regimes of the survival probability and the
// crossovers between them.
//
//   P00(t) ~ 1 - (v0 t)^2                                   t < t_S
//          ~ A exp(-2 Gamma0 t)                             t_S < t < t_R
//          ~ C [1 - 2b/(1+b^2) sin(B t)] [1/(Gamma(eps_r) t)]^3   t_R < t

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "survival/model.hpp"
#include "survival/propagate.hpp"
#include "survival/spectral.hpp"

namespace survival {

/// Exponent of the band-edge Van Hove singularity of the chain, N0 ~ (e - e_L)^nu.
inline constexpr double kVanHoveExponent = 0.5;

/// Underflow threshold below which effective rates are masked.
inline constexpr double kRateUnderflow = 1e-300;

enum class Branch { Quadratic, Exponential, PowerLaw };

std::string to_string(Branch b);

struct PiecewiseValue {
    double value;
    Branch branch;
};

struct ShortTime {
    double exact;  // hbar Gamma0 / v0^2
    double fgr;    // hbar pi N1(eps0)
};

struct ReturnTimes {
    double closed_form;            // a1/Gamma0 ln(a2 B / (4 Gamma0))
    std::vector<double> iterates;  // t_R^(0), t_R^(1), ... of the weak-coupling iteration
    double fixed_point;            // A exp(-2 Gamma0 t) = C/(Gamma(eps_r) t)^3 with exact A, C
    bool converged;
    double a1;
    double a2;
};

ShortTime t_short(const Resonance& res, const ChainModel& model);

/// `iterations` is the number of iterates returned after the seed hbar/(2 Gamma0).
ReturnTimes t_return(const Resonance& res, const ChainModel& model, int iterations = 8);

/// Fixed-point iteration of the exact exponential/power-law equality, seeded at hbar/(2 Gamma0).
double return_fixed_point(const Resonance& res);

/// Three-branch law; switches at t_S (exact form) and at the fixed-point t_R.
PiecewiseValue piecewise_p00(double t, const Resonance& res, const ChainModel& model);

/// exp[(1 - sqrt(1 + (t/t_S)^2)) 2 Gamma0 t_S]
double interpolation_p00(double t, double t_s, double gamma0);

/// Exponential window of the SC-FGR law, A exp(-2 Gamma0 t).
double exponential_p00(double t, const Resonance& res);

/// Period-averaged power-law tail, C / (Gamma(eps_r) t)^3.
double power_law_envelope(double t, const Resonance& res);

struct RateTrace {
    std::vector<double> times;
    std::vector<double> rates;
    std::vector<bool> valid;  // false where P00 underflows or t <= 0
};

/// Gamma_eff(t) = -hbar ln P00(t) / (2 t).
RateTrace effective_rate(const SurvivalSeries& series);

/// Sliding average of P00 over a window of one period centred on each sample.
std::vector<double> period_average(const SurvivalSeries& series, double period);

struct Collapse {
    double time;
    double depth;  // decades below min(exponential, power-law envelope)
};

/// Deepest local minimum of P00 in [0.5 t_R, 2 t_R] (t_R the fixed point);
/// none if shallower than half a decade.
std::optional<Collapse> detect_collapse(const SurvivalSeries& series, const Resonance& res);

/// Polishes a detected dip by golden-section search of `p00` within +-bracket.
Collapse refine_collapse(const Collapse& coarse, const std::function<double(double)>& p00, double bracket,
                         const Resonance& res);

/// First time after t_S at which the period-averaged P00 exceeds e times the
/// SC-FGR exponential. Returns none if it never does inside the series.
std::optional<double> numeric_return_time(const SurvivalSeries& series, const Resonance& res,
                                          const ChainModel& model);

struct PowerLawFit {
    double exponent;
    double modulation_frequency;
};

/// Log-log least squares on the period-averaged tail beyond t_min, plus the
/// dominant angular frequency of the residual oscillation.
PowerLawFit fit_power_law(const SurvivalSeries& series, double t_min, double bandwidth);

struct RegimeReport {
    Resonance resonance;
    ShortTime t_s;
    ReturnTimes t_r;
    std::optional<double> t_r_numeric;
    std::optional<Collapse> collapse;
    double a1;
    double a2;
    double nu;
};

nlohmann::json to_json(const RegimeReport& report);

} // namespace survival
