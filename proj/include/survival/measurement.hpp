// measurement.hpp: survival under stroboscopic projective measurement of |0>.
//
// Each projection resets the state to |0> with the surviving weight and
// discards environment correlations, so after n periods P = P00(tau)^n.

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "survival/model.hpp"
#include "survival/propagate.hpp"

namespace survival {

/// Unmeasured survival probability P00(t) backed by one of the routes.
class SurvivalOracle {
public:
    /// EigenOracle and LdosQuadrature are prepared for times up to t_max.
    static SurvivalOracle from_model(const ChainModel& model, Route route, double t_max, double margin = 1.25);

    /// Synthetic A exp(-2 gamma0 t).
    static SurvivalOracle exponential(double prefactor, double gamma0);

    SurvivalOracle(std::function<double(double)> p00, Route route, double t_max);

    double probability(double t) const { return p00_(t); }
    Route route() const noexcept { return route_; }
    double t_max() const noexcept { return t_max_; }

private:
    std::function<double(double)> p00_;
    Route route_;
    double t_max_;
};

struct MeasurementSchedule {
    MeasurementSchedule(double period, std::size_t count);

    double period;
    std::size_t count;
};

struct MeasuredSurvival {
    double probability;
    bool collapse_zero;  // P00(tau) == 0 exactly
};

MeasuredSurvival survival_under_measurement(const SurvivalOracle& oracle, const MeasurementSchedule& schedule);

struct MeasuredRate {
    double rate;
    bool infinite;
};

/// Gamma_meas(tau) = -hbar ln P00(tau) / (2 tau).
MeasuredRate measured_rate(const SurvivalOracle& oracle, double tau);

enum class ZenoClass { Zeno, AntiZeno, Neutral };

std::string to_string(ZenoClass c);

inline constexpr double kZenoBand = 0.05;

ZenoClass classify(const MeasuredRate& rate, double gamma0, double delta = kZenoBand);

/// Classifies period-tau measurement of `model` against its Gamma0.
ZenoClass classify(const ChainModel& model, double tau, Route route = Route::EigenOracle,
                   double delta = kZenoBand);

struct SweepRow {
    double tau;
    MeasuredRate rate;
    ZenoClass cls;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double gamma0;
    std::size_t argmax;  // row with the largest finite Gamma_meas
};

SweepTable sweep_tau(const SurvivalOracle& oracle, double gamma0, std::span<const double> tau_grid,
                     double delta = kZenoBand);

SweepTable sweep_tau(const ChainModel& model, std::span<const double> tau_grid, Route route = Route::EigenOracle,
                     double delta = kZenoBand);

} // namespace survival
