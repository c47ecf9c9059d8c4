#include "survival/measurement.hpp"

#include <cmath>
#include <limits>

#include "survival/errors.hpp"
#include "survival/regimes.hpp"
#include "survival/spectral.hpp"

namespace survival {

SurvivalOracle SurvivalOracle::from_model(const ChainModel& model, Route route, double t_max, double margin) {
    if (!(t_max > 0.0)) throw ParameterError("oracle t_max must be positive");
    switch (route) {
    case Route::EigenOracle: {
        auto prop = std::make_shared<const EigenPropagator>(
            truncate(model, choose_chain_length(t_max, model.v(), margin)));
        return {[prop](double t) { return prop->probability(t); }, route, t_max};
    }
    case Route::LdosQuadrature: {
        auto quad = std::make_shared<const LdosQuadrature>(model, t_max);
        return {[quad](double t) { return quad->probability(t); }, route, t_max};
    }
    case Route::PiecewiseLaw: {
        const Resonance res = resonance_params(model);
        return {[res, model](double t) { return piecewise_p00(t, res, model).value; }, route, t_max};
    }
    case Route::Interpolation: {
        const Resonance res = resonance_params(model);
        const double t_s = t_short(res, model).exact;
        return {[t_s, g0 = res.gamma0](double t) { return interpolation_p00(t, t_s, g0); }, route, t_max};
    }
    }
    throw ParameterError("unsupported route");
}

SurvivalOracle SurvivalOracle::exponential(double prefactor, double gamma0) {
    return {[prefactor, gamma0](double t) { return prefactor * std::exp(-2.0 * gamma0 * t); },
            Route::PiecewiseLaw, std::numeric_limits<double>::infinity()};
}

SurvivalOracle::SurvivalOracle(std::function<double(double)> p00, Route route, double t_max)
    : p00_(std::move(p00)), route_(route), t_max_(t_max) {}

MeasurementSchedule::MeasurementSchedule(double period_, std::size_t count_) : period(period_), count(count_) {
    if (!(period > 0.0)) throw ParameterError("measurement period must be positive");
    if (count < 1) throw ParameterError("at least one projection is required");
}

MeasuredSurvival survival_under_measurement(const SurvivalOracle& oracle, const MeasurementSchedule& schedule) {
    const double p = oracle.probability(schedule.period);
    if (p == 0.0) return {0.0, true};
    return {std::exp(static_cast<double>(schedule.count) * std::log(p)), false};
}

MeasuredRate measured_rate(const SurvivalOracle& oracle, double tau) {
    if (!(tau > 0.0)) throw ParameterError("measurement period must be positive");
    const double p = oracle.probability(tau);
    if (p <= 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {-std::log(p) / (2.0 * tau), false};
}

std::string to_string(ZenoClass c) {
    switch (c) {
    case ZenoClass::Zeno: return "Zeno";
    case ZenoClass::AntiZeno: return "AntiZeno";
    case ZenoClass::Neutral: return "Neutral";
    }
    return "Unknown";
}

ZenoClass classify(const MeasuredRate& rate, double gamma0, double delta) {
    if (rate.infinite || rate.rate > (1.0 + delta) * gamma0) return ZenoClass::AntiZeno;
    if (rate.rate < (1.0 - delta) * gamma0) return ZenoClass::Zeno;
    return ZenoClass::Neutral;
}

ZenoClass classify(const ChainModel& model, double tau, Route route, double delta) {
    const Resonance res = resonance_params(model);
    const auto oracle = SurvivalOracle::from_model(model, route, tau);
    return classify(measured_rate(oracle, tau), res.gamma0, delta);
}

SweepTable sweep_tau(const SurvivalOracle& oracle, double gamma0, std::span<const double> tau_grid, double delta) {
    SweepTable table{{}, gamma0, 0};
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > 0.0) || (i > 0 && !(tau_grid[i] > tau_grid[i - 1])))
            throw ParameterError("tau grid must be positive and strictly increasing");
        const auto rate = measured_rate(oracle, tau_grid[i]);
        table.rows.push_back({tau_grid[i], rate, classify(rate, gamma0, delta)});
        if (!rate.infinite && rate.rate > best) best = rate.rate, table.argmax = i;
    }
    return table;
}

SweepTable sweep_tau(const ChainModel& model, std::span<const double> tau_grid, Route route, double delta) {
    if (tau_grid.empty()) throw ParameterError("empty tau grid");
    const Resonance res = resonance_params(model);
    const auto oracle = SurvivalOracle::from_model(model, route, tau_grid.back());
    return sweep_tau(oracle, res.gamma0, tau_grid, delta);
}

} // namespace survival
