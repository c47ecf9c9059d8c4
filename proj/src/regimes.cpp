#include "survival/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "survival/errors.hpp"

namespace survival {

namespace {

constexpr double kCollapseThreshold = 0.5;  // decades
constexpr double kFloor = 1e-300;

double modulation_period(double bandwidth) { return 2.0 * std::numbers::pi / bandwidth; }

// Running integral of the piecewise-linear interpolant of P00.
class LinearIntegral {
public:
    explicit LinearIntegral(const SurvivalSeries& s) : t_(s.times), p_(s.probabilities), cum_(t_.size(), 0.0) {
        for (std::size_t i = 1; i < t_.size(); ++i)
            cum_[i] = cum_[i - 1] + 0.5 * (p_[i] + p_[i - 1]) * (t_[i] - t_[i - 1]);
    }

    double at(double t) const {
        if (t <= t_.front()) return 0.0;
        if (t >= t_.back()) return cum_.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
        const std::size_t lo = hi - 1;
        const double dt = t - t_[lo];
        const double slope = (p_[hi] - p_[lo]) / (t_[hi] - t_[lo]);
        return cum_[lo] + dt * (p_[lo] + 0.5 * slope * dt);
    }

private:
    const std::vector<double>& t_;
    const std::vector<double>& p_;
    std::vector<double> cum_;
};

void require_series(const SurvivalSeries& s) {
    if (s.times.size() < 2 || s.times.size() != s.probabilities.size())
        throw ParameterError("series needs at least two samples with matching probabilities");
}

template <class F>
double golden_minimize(F f, double lo, double hi, double tol) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double collapse_depth(double t, double p, const Resonance& res) {
    const double envelope = std::min(exponential_p00(t, res), power_law_envelope(t, res));
    return std::log10(envelope / std::max(p, kFloor));
}

} // namespace

std::string to_string(Branch b) {
    switch (b) {
    case Branch::Quadratic: return "Quadratic";
    case Branch::Exponential: return "Exponential";
    case Branch::PowerLaw: return "PowerLaw";
    }
    return "Unknown";
}

ShortTime t_short(const Resonance& res, const ChainModel& model) {
    return {model.hbar() * res.gamma0 / (model.v0() * model.v0()),
            model.hbar() * std::numbers::pi * ldos_1_unperturbed(model.eps0(), model.v())};
}

ReturnTimes t_return(const Resonance& res, const ChainModel& model, int iterations) {
    if (iterations < 1) throw ParameterError("at least one iteration is required");
    const double g0 = res.gamma0;
    const double v = model.v();
    const double hbar = model.hbar();

    ReturnTimes out{};
    out.a1 = kVanHoveExponent + 2.0;
    out.a2 = std::pow(4.0 * std::numbers::pi, 0.2);
    out.closed_form = out.a1 * hbar / g0 * std::log(out.a2 * res.bandwidth / (4.0 * g0));

    // Weak coupling: sqrt(A/C) ~ sqrt(32 pi) v / Gamma0 and Gamma(eps_r) ~ v.
    // The first iterate from hbar/(2 Gamma0) reproduces the closed form.
    const double log_ratio = std::log(std::sqrt(32.0 * std::numbers::pi) * v / g0);
    double t = hbar / (2.0 * g0);
    double change = 0.0;
    for (int k = 0; k < iterations && t > 0.0; ++k) {
        const double next = hbar / g0 * (log_ratio + 1.5 * std::log(v * t / hbar));
        change = std::abs(next - t) / std::abs(next);
        t = next;
        out.iterates.push_back(t);
    }
    out.converged = t > 0.0 && change < 1e-6;

    out.fixed_point = return_fixed_point(res);
    return out;
}

double return_fixed_point(const Resonance& res) {
    // A exp(-2 Gamma0 t) = C / (Gamma(eps_r) t)^3 with the exact prefactors, hbar = 1.
    const double g0 = res.gamma0;
    const double log_ac = std::log(res.prefactor_a / res.prefactor_c);
    double t = 1.0 / (2.0 * g0);
    for (int k = 0; k < 500; ++k) {
        const double next = (log_ac + 3.0 * std::log(res.gamma_at_resonance * t)) / (2.0 * g0);
        if (!(next > 0.0)) break;
        const bool done = std::abs(next - t) <= 1e-13 * next;
        t = next;
        if (done) break;
    }
    return t;
}

double exponential_p00(double t, const Resonance& res) { return res.prefactor_a * std::exp(-2.0 * res.gamma0 * t); }

double power_law_envelope(double t, const Resonance& res) {
    return res.prefactor_c / std::pow(res.gamma_at_resonance * t, 3);
}

PiecewiseValue piecewise_p00(double t, const Resonance& res, const ChainModel& model) {
    if (t < 0.0) throw DomainError("piecewise survival law is defined for t >= 0");
    const double t_s = t_short(res, model).exact;
    if (t < t_s) {
        const double x = model.v0() * t / model.hbar();
        return {std::max(0.0, 1.0 - x * x), Branch::Quadratic};
    }
    const double t_r = return_fixed_point(res);
    if (t < t_r) return {exponential_p00(t, res), Branch::Exponential};
    const double mod = 2.0 * res.beta / (1.0 + res.beta * res.beta);
    return {(1.0 - mod * std::sin(res.bandwidth * t / model.hbar())) * power_law_envelope(t, res),
            Branch::PowerLaw};
}

double interpolation_p00(double t, double t_s, double gamma0) {
    if (t < 0.0) throw DomainError("interpolation law is defined for t >= 0");
    const double r = t / t_s;
    return std::exp((1.0 - std::sqrt(1.0 + r * r)) * 2.0 * gamma0 * t_s);
}

RateTrace effective_rate(const SurvivalSeries& series) {
    RateTrace trace;
    trace.times = series.times;
    trace.rates.resize(series.size(), 0.0);
    trace.valid.resize(series.size(), false);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        const double p = series.probabilities[i];
        if (t > 0.0 && p > kRateUnderflow) {
            trace.rates[i] = -std::log(p) / (2.0 * t);
            trace.valid[i] = true;
        }
    }
    return trace;
}

std::vector<double> period_average(const SurvivalSeries& series, double period) {
    require_series(series);
    if (!(period > 0.0)) throw ParameterError("averaging period must be positive");
    const LinearIntegral integral(series);
    std::vector<double> avg(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double a = std::max(series.times[i] - 0.5 * period, series.times.front());
        const double b = std::min(series.times[i] + 0.5 * period, series.times.back());
        avg[i] = (integral.at(b) - integral.at(a)) / (b - a);
    }
    return avg;
}

std::optional<Collapse> detect_collapse(const SurvivalSeries& series, const Resonance& res) {
    require_series(series);
    const double t_r = return_fixed_point(res);
    const double lo = 0.5 * t_r, hi = 2.0 * t_r;

    std::optional<Collapse> best;
    const auto& t = series.times;
    const auto& p = series.probabilities;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (t[i] < lo || t[i] > hi) continue;
        if (!(p[i] < p[i - 1] && p[i] <= p[i + 1])) continue;
        const double depth = collapse_depth(t[i], p[i], res);
        if (!best || depth > best->depth) best = Collapse{t[i], depth};
    }
    if (best && best->depth < kCollapseThreshold) return std::nullopt;
    return best;
}

Collapse refine_collapse(const Collapse& coarse, const std::function<double(double)>& p00, double bracket,
                         const Resonance& res) {
    const double lo = std::max(coarse.time - bracket, 0.0);
    const double t = golden_minimize(p00, lo, coarse.time + bracket, 1e-10 * (1.0 + coarse.time));
    const double p = p00(t);
    if (p > p00(coarse.time)) return coarse;
    return {t, collapse_depth(t, p, res)};
}

std::optional<double> numeric_return_time(const SurvivalSeries& series, const Resonance& res,
                                          const ChainModel& model) {
    require_series(series);
    const double period = modulation_period(res.bandwidth / model.hbar());
    const auto avg = period_average(series, period);
    const double t_start = t_short(res, model).exact + 0.5 * period;
    const double t_stop = series.times.back() - 0.5 * period;

    auto excess = [&](std::size_t i) {
        return std::log(std::max(avg[i], kFloor)) - std::log(exponential_p00(series.times[i], res)) - 1.0;
    };
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (t < t_start || t > t_stop) continue;
        const double x = excess(i);
        if (x > 0.0) {
            if (!prev) return t;
            const double x0 = excess(*prev);
            const double t0 = series.times[*prev];
            return t0 + (t - t0) * (-x0) / (x - x0);
        }
        prev = i;
    }
    return std::nullopt;
}

PowerLawFit fit_power_law(const SurvivalSeries& series, double t_min, double bandwidth) {
    require_series(series);
    const double period = modulation_period(bandwidth);
    const auto avg = period_average(series, period);
    const double lo = t_min + 0.5 * period;
    const double hi = series.times.back() - 0.5 * period;
    if (hi - lo < 3.0 * period)
        throw ParameterError("power-law fit needs at least three modulation periods beyond t_min");

    std::vector<double> t, logt, logp, resid;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double ti = series.times[i];
        if (ti < lo || ti > hi || !(avg[i] > 0.0)) continue;
        t.push_back(ti);
        logt.push_back(std::log(ti));
        logp.push_back(std::log(avg[i]));
        resid.push_back(series.probabilities[i] / avg[i] - 1.0);
    }
    const auto n = static_cast<double>(t.size());
    if (t.size() < 8) throw ParameterError("too few samples for the power-law fit");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < t.size(); ++i) mx += logt[i], my += logp[i];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (logt[i] - mx) * (logp[i] - my);
        sxx += (logt[i] - mx) * (logt[i] - mx);
    }

    double mean_r = 0;
    for (double r : resid) mean_r += r;
    mean_r /= n;
    double max_dt = 0;
    for (std::size_t i = 1; i < t.size(); ++i) max_dt = std::max(max_dt, t[i] - t[i - 1]);

    // Periodogram of the residual on the (possibly non-uniform) samples.
    auto power = [&](double omega) {
        std::complex<double> sum = 0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            const double w = t[i] - t[i - 1];
            sum += w * (resid[i] - mean_r) * std::polar(1.0, -omega * t[i]);
        }
        return std::norm(sum);
    };
    const double span = t.back() - t.front();
    const double step = 2.0 * std::numbers::pi / (8.0 * span);
    const double omega_max = std::numbers::pi / max_dt;
    double best_omega = 0, best_power = -1;
    for (double omega = 3.0 * 2.0 * std::numbers::pi / span; omega < omega_max; omega += step) {
        const double pw = power(omega);
        if (pw > best_power) best_power = pw, best_omega = omega;
    }
    const double refined = golden_minimize([&](double w) { return -power(w); }, best_omega - step,
                                           best_omega + step, 1e-10);
    return {sxy / sxx, refined};
}

nlohmann::json to_json(const RegimeReport& r) {
    nlohmann::json j;
    const auto& res = r.resonance;
    j["resonance"] = {{"eps_r", res.eps_r},         {"delta0", res.delta0},
                      {"gamma0", res.gamma0},       {"gamma_c", res.gamma_c},
                      {"prefactor_a", res.prefactor_a}, {"beta", res.beta},
                      {"prefactor_c", res.prefactor_c}, {"gamma_at_resonance", res.gamma_at_resonance},
                      {"bandwidth", res.bandwidth}};
    j["t_s"] = r.t_s.exact;
    j["t_s_fgr"] = r.t_s.fgr;
    j["t_r_closed_form"] = r.t_r.closed_form;
    j["t_r_iterates"] = r.t_r.iterates;
    j["t_r_iterates_converged"] = r.t_r.converged;
    j["t_r_fixed_point"] = r.t_r.fixed_point;
    j["t_r_numeric"] = r.t_r_numeric ? nlohmann::json(*r.t_r_numeric) : nlohmann::json(nullptr);
    j["collapse_time"] = r.collapse ? nlohmann::json(r.collapse->time) : nlohmann::json(nullptr);
    j["collapse_depth"] = r.collapse ? nlohmann::json(r.collapse->depth) : nlohmann::json(nullptr);
    j["a1"] = r.a1;
    j["a2"] = r.a2;
    j["nu"] = r.nu;
    return j;
}

} // namespace survival
