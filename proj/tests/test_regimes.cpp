#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "survival/errors.hpp"
#include "survival/propagate.hpp"
#include "survival/regimes.hpp"

using namespace survival;
using doctest::Approx;

namespace {

std::vector<double> uniform_grid(double a, double b, double step) {
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double t = a + step * static_cast<double>(i);
        if (t > b + 1e-12) break;
        out.push_back(t);
    }
    return out;
}

SurvivalSeries eigen_series(const ChainModel& m, double t_max, double step) {
    const auto times = uniform_grid(0.0, t_max, step);
    return evolve_eigen(truncate(m, choose_chain_length(t_max, m.v())), times);
}

SurvivalSeries synthetic(const std::vector<double>& times, double (*f)(double)) {
    std::vector<double> p;
    for (double t : times) p.push_back(f(t));
    return series_from_probabilities(times, p, Route::PiecewiseLaw);
}

const ChainModel kWeak = build_chain(1.0, 0.4, 1.0);
const ChainModel kStrong = build_chain(1.8, 0.77, 1.0);

} // namespace

TEST_CASE("frozen constants") {
    const auto tr = t_return(resonance_params(kWeak), kWeak);
    CHECK(tr.a1 == 2.5);
    CHECK(tr.a2 == Approx(std::pow(4.0 * std::numbers::pi, 0.2)).epsilon(1e-15));
    CHECK(kVanHoveExponent == 0.5);
    CHECK(tr.a1 == kVanHoveExponent + 2.0);
}

TEST_CASE("t_short") {
    const auto r = resonance_params(kWeak);
    const auto ts = t_short(r, kWeak);
    CHECK(ts.fgr == Approx(std::numbers::pi * std::sqrt(3.0) / 2.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(std::abs(ts.fgr - 0.8) <= 0.1);
    CHECK(ts.exact == Approx(r.gamma0 / 0.16).epsilon(1e-15));

    for (double v0 : {0.1, 0.2, 0.4}) {
        const auto m = build_chain(1.0, v0, 1.0);
        const auto s = t_short(resonance_params(m), m);
        CHECK(std::abs(s.exact / s.fgr - 1.0) < 0.15);
    }
    const auto centre = build_chain(2.0, 0.3, 1.0);
    CHECK(t_short(resonance_params(centre), centre).fgr == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("t_return") {
    const auto r = resonance_params(kWeak);
    const auto tr = t_return(r, kWeak);
    REQUIRE(tr.iterates.size() == 8);
    CHECK(tr.closed_form == Approx(41.49).epsilon(1e-3));
    CHECK(std::abs(tr.iterates[0] - 41.0) <= 1.0);
    CHECK(tr.iterates[0] == Approx(tr.closed_form).epsilon(1e-12));
    CHECK(std::abs(tr.iterates[1] - 67.0) <= 2.0);
    CHECK(tr.fixed_point == Approx(61.65).epsilon(1e-3));
    CHECK(tr.fixed_point > t_short(r, kWeak).exact);

    // Fixed point of the exact equality.
    CHECK(exponential_p00(tr.fixed_point, r) == Approx(power_law_envelope(tr.fixed_point, r)).epsilon(1e-10));

    for (double v0 : {0.1, 0.2, 0.4}) {
        CAPTURE(v0);
        const auto m = build_chain(1.0, v0, 1.0);
        const auto it = t_return(resonance_params(m), m, 12);
        CHECK(it.converged);
        for (std::size_t k = 1; k < it.iterates.size(); ++k) {
            CHECK(it.iterates[k] >= it.iterates[k - 1]);
            CHECK(it.iterates[k] > t_short(resonance_params(m), m).exact);
        }
        for (std::size_t k = 2; k < it.iterates.size(); ++k) {
            const double d1 = it.iterates[k - 1] - it.iterates[k - 2];
            const double d2 = it.iterates[k] - it.iterates[k - 1];
            CHECK(d2 <= 0.5 * d1 + 1e-9);
        }
    }
    CHECK_THROWS_AS(t_return(r, kWeak, 0), ParameterError);
    const auto once = t_return(r, kWeak, 1);
    CHECK_FALSE(once.converged);
}

TEST_CASE("piecewise_p00") {
    const auto r = resonance_params(kWeak);
    const auto ts = t_short(r, kWeak).exact;
    const auto tr = return_fixed_point(r);

    const auto zero = piecewise_p00(0.0, r, kWeak);
    CHECK(zero.value == 1.0);
    CHECK(zero.branch == Branch::Quadratic);
    CHECK(piecewise_p00(0.5 * ts, r, kWeak).value == Approx(1.0 - 0.16 * 0.25 * ts * ts).epsilon(1e-15));

    const auto ten = piecewise_p00(10.0, r, kWeak);
    CHECK(ten.branch == Branch::Exponential);
    CHECK(ten.value == Approx(r.prefactor_a * std::exp(-2.0 * 0.14630753805464 * 10.0)).epsilon(1e-12));
    const LdosQuadrature q(kWeak, 210.0);
    CHECK(std::abs(ten.value / q.probability(10.0) - 1.0) < 0.05);

    const auto tail = piecewise_p00(200.0, r, kWeak);
    CHECK(tail.branch == Branch::PowerLaw);
    double avg = 0.0;
    const int n = 200;
    for (int k = 0; k < n; ++k) avg += q.probability(200.0 - std::numbers::pi / 4 + std::numbers::pi / 2 * (k + 0.5) / n);
    avg /= n;
    CHECK(tail.value / avg < 2.0);
    CHECK(avg / tail.value < 2.0);

    CHECK(piecewise_p00(tr * (1 - 1e-9), r, kWeak).branch == Branch::Exponential);
    CHECK(piecewise_p00(tr * (1 + 1e-9), r, kWeak).branch == Branch::PowerLaw);
    CHECK_THROWS_AS(piecewise_p00(-1.0, r, kWeak), DomainError);

    // Consistency with the oracle on the exponential window.
    for (double t = 2.0 * ts; t <= 0.5 * tr; t += 0.1)
        CHECK(std::abs(piecewise_p00(t, r, kWeak).value / q.probability(t) - 1.0) < 0.1);
}

TEST_CASE("interpolation_p00") {
    const auto r = resonance_params(kWeak);
    const double ts = t_short(r, kWeak).exact;
    CHECK(interpolation_p00(0.0, ts, r.gamma0) == 1.0);

    const double t = ts / 100.0;
    CHECK(interpolation_p00(t, ts, r.gamma0) == Approx(1.0 - r.gamma0 * t * t / ts).epsilon(1e-6));
    CHECK(interpolation_p00(t, ts, r.gamma0) == Approx(1.0 - 0.16 * t * t).epsilon(1e-6));

    const double big = 50.0 * ts;
    const double a = std::exp(2.0 * r.gamma0 * r.gamma0 / 0.16);
    const double ratio = interpolation_p00(big, ts, r.gamma0) / (a * std::exp(-2.0 * r.gamma0 * big));
    CHECK(ratio >= 0.99);
    CHECK(ratio <= 1.01);
    CHECK_THROWS_AS(interpolation_p00(-0.1, ts, r.gamma0), DomainError);
}

TEST_CASE("effective_rate") {
    const auto times = uniform_grid(0.0, 50.0, 0.5);
    SUBCASE("pure exponential") {
        const auto trace = effective_rate(synthetic(times, [](double t) { return std::exp(-0.28 * t); }));
        CHECK_FALSE(trace.valid[0]);
        for (std::size_t i = 1; i < times.size(); ++i) {
            CHECK(trace.valid[i]);
            CHECK(trace.rates[i] == Approx(0.14).epsilon(1e-12));
        }
    }
    SUBCASE("quadratic regime") {
        const auto small = uniform_grid(1e-4, 1e-2, 1e-4);
        const auto trace = effective_rate(synthetic(small, [](double t) { return 1.0 - 0.16 * t * t; }));
        for (std::size_t i = 0; i < small.size(); ++i)
            CHECK(trace.rates[i] == Approx(0.16 * small[i] / 2.0).epsilon(1e-4));
    }
    SUBCASE("underflow is masked") {
        const auto trace = effective_rate(synthetic({1.0, 2.0, 3.0}, [](double t) { return t < 2.5 ? 0.5 : 0.0; }));
        CHECK(trace.valid[0]);
        CHECK_FALSE(trace.valid[2]);
    }
    SUBCASE("exponential branch identity") {
        const auto r = resonance_params(kWeak);
        for (double t = 2.0; t < 40.0; t += 1.3) {
            const double p = piecewise_p00(t, r, kWeak).value;
            const auto trace = effective_rate(series_from_probabilities({t}, {p}, Route::PiecewiseLaw));
            CHECK(std::abs(trace.rates[0] - (r.gamma0 - std::log(r.prefactor_a) / (2.0 * t))) < 1e-12);
        }
    }
    SUBCASE("peak near the strong-coupling collapse") {
        const auto trace = effective_rate(eigen_series(kStrong, 12.0, 0.002));
        std::size_t best = 0;
        for (std::size_t i = 0; i < trace.rates.size(); ++i)
            if (trace.valid[i] && trace.times[i] > 1.0 && trace.rates[i] > trace.rates[best]) best = i;
        CHECK(std::abs(trace.times[best] - 6.8) < 0.2 * 6.8);
    }
}

TEST_CASE("period_average") {
    const auto times = uniform_grid(0.0, 20.0, 0.001);
    const auto avg = period_average(synthetic(times, [](double t) { return 0.5 + 0.3 * std::sin(4.0 * t); }),
                                    std::numbers::pi / 2.0);
    for (std::size_t i = 1000; i + 1000 < times.size(); i += 97) CHECK(avg[i] == Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(period_average(synthetic(times, [](double) { return 1.0; }), 0.0), ParameterError);
}

TEST_CASE("collapse detection") {
    SUBCASE("weak coupling near the numeric crossover") {
        const auto r = resonance_params(kWeak);
        const auto c = detect_collapse(eigen_series(kWeak, 130.0, 0.01), r);
        REQUIRE(c);
        CHECK(std::abs(c->time - 62.0) < 0.15 * 62.0);
        CHECK(c->depth >= 0.5);
    }
    SUBCASE("strong coupling") {
        const auto r = resonance_params(kStrong);
        const auto series = eigen_series(kStrong, 15.0, 0.01);
        const auto c = detect_collapse(series, r);
        REQUIRE(c);
        CHECK(std::abs(c->time - 6.8) < 0.2 * 6.8);
        const EigenPropagator prop(truncate(kStrong, choose_chain_length(15.0, 1.0)));
        const auto fine = refine_collapse(*c, [&](double t) { return prop.probability(t); }, 0.02, r);
        CHECK(fine.depth >= c->depth);
        CHECK(fine.depth >= 2.0);
        CHECK(std::abs(fine.time - 6.8) < 0.2 * 6.8);
    }
    SUBCASE("synthetic inputs never fire") {
        const auto r = resonance_params(kWeak);
        const auto times = uniform_grid(0.0, 200.0, 0.01);
        CHECK_FALSE(detect_collapse(synthetic(times, [](double t) { return std::exp(-0.29 * t); }), r));
        CHECK_FALSE(detect_collapse(synthetic(times, [](double t) { return 1e-3 / std::pow(1.0 + t, 3); }), r));
    }
}

TEST_CASE("numeric return time") {
    const auto r = resonance_params(kWeak);
    const auto t = numeric_return_time(eigen_series(kWeak, 130.0, 0.01), r, kWeak);
    REQUIRE(t);
    CHECK(std::abs(*t - 62.0) <= 0.15 * 62.0);

    const auto early = numeric_return_time(eigen_series(kWeak, 30.0, 0.01), r, kWeak);
    CHECK_FALSE(early);
}

TEST_CASE("power-law fit") {
    const LdosQuadrature q(kWeak, 300.0);
    const auto times = uniform_grid(100.0, 300.0, 0.02);
    std::vector<double> p;
    for (double t : times) p.push_back(q.probability(t));
    const auto series = series_from_probabilities(times, p, Route::LdosQuadrature);
    const auto fit = fit_power_law(series, 100.0, 4.0);
    CHECK(std::abs(fit.exponent + 3.0) <= 0.1);
    CHECK(std::abs(fit.exponent + (2.0 * kVanHoveExponent + 2.0)) <= 0.1);
    CHECK(std::abs(fit.modulation_frequency / 4.0 - 1.0) <= 0.02);

    CHECK_THROWS_AS(fit_power_law(series, 298.0, 4.0), ParameterError);
}

TEST_CASE("band centre: modulation touches zero") {
    const auto m = build_chain(2.0, 0.4, 1.0);
    const auto r = resonance_params(m);
    CHECK(2.0 * r.beta / (1.0 + r.beta * r.beta) == Approx(1.0).epsilon(1e-15));
    // Piecewise tail reaches zero once per period.
    const double tr = return_fixed_point(r);
    double lo = 1.0;
    for (double t = 1.5 * tr; t < 1.5 * tr + std::numbers::pi / 2; t += 1e-4)
        lo = std::min(lo, piecewise_p00(t, r, m).value / power_law_envelope(t, r));
    CHECK(lo < 1e-6);
    // The oracle shows near-zeros: far below the period average.
    const LdosQuadrature q(m, 200.0);
    double pmin = 1.0, pavg = 0.0;
    const int n = 2000;
    for (int k = 0; k < n; ++k) {
        const double p = q.probability(150.0 + std::numbers::pi / 2 * k / n);
        pmin = std::min(pmin, p);
        pavg += p / n;
    }
    CHECK(pmin < 0.05 * pavg);
}

TEST_CASE("report JSON") {
    const auto r = resonance_params(kWeak);
    RegimeReport rep{r, t_short(r, kWeak), t_return(r, kWeak), 63.0, Collapse{61.6, 2.0}, 2.5,
                     std::pow(4.0 * std::numbers::pi, 0.2), kVanHoveExponent};
    const auto j = to_json(rep);
    CHECK(j["t_r_iterates"].size() == 8);
    CHECK(j["collapse_time"].get<double>() == 61.6);
    CHECK(j["nu"].get<double>() == 0.5);
    CHECK(j["resonance"]["gamma0"].get<double>() == r.gamma0);
    rep.collapse.reset();
    CHECK(to_json(rep)["collapse_depth"].is_null());
}
