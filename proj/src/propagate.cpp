#include "survival/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "survival/errors.hpp"
#include "survival/spectral.hpp"

namespace survival {

namespace {

using cplx = std::complex<double>;

// Full symmetric node/weight set on [-1, 1] from boost's half-rule tables.
template <unsigned N>
std::pair<std::vector<double>, std::vector<double>> gauss_rule() {
    using rule = boost::math::quadrature::gauss<double, N>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    std::vector<double> nodes, weights;
    for (std::size_t i = 0; i < x.size(); ++i) {
        nodes.push_back(x[i]);
        weights.push_back(w[i]);
        if (x[i] != 0.0) {
            nodes.push_back(-x[i]);
            weights.push_back(w[i]);
        }
    }
    return {nodes, weights};
}

struct Panel {
    double lo;
    double hi;
    int depth;
};

// A band half parametrized by s in [0, s_max]: eps = origin + sign * s^2.
struct EdgeMap {
    double origin;
    double sign;
    double energy(double s) const { return origin + sign * s * s; }
};

void integrate_panel(const Panel& p, const EdgeMap& map, const ChainModel& model,
                     const std::vector<double>& x, const std::vector<double>& w,
                     std::vector<double>& energies, std::vector<double>& weights) {
    const double mid = 0.5 * (p.lo + p.hi);
    const double half = 0.5 * (p.hi - p.lo);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = mid + half * x[i];
        const double e = map.energy(s);
        energies.push_back(e);
        weights.push_back(half * w[i] * 2.0 * s * ldos_0(e, model));
    }
}

cplx sum_nodes(std::span<const double> e, std::span<const double> wt, double t) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) sum += wt[i] * std::polar(1.0, -e[i] * t);
    return sum;
}

} // namespace

std::string to_string(Route r) {
    switch (r) {
    case Route::EigenOracle: return "EigenOracle";
    case Route::LdosQuadrature: return "LdosQuadrature";
    case Route::PiecewiseLaw: return "PiecewiseLaw";
    case Route::Interpolation: return "Interpolation";
    }
    return "Unknown";
}

Route route_from_string(const std::string& name) {
    if (name == "EigenOracle" || name == "eigen") return Route::EigenOracle;
    if (name == "LdosQuadrature" || name == "quadrature") return Route::LdosQuadrature;
    if (name == "PiecewiseLaw" || name == "piecewise") return Route::PiecewiseLaw;
    if (name == "Interpolation" || name == "interpolation") return Route::Interpolation;
    throw ParameterError("unknown route '" + name + "'");
}

SurvivalSeries series_from_probabilities(std::vector<double> times, std::vector<double> probabilities,
                                         Route route) {
    if (times.size() != probabilities.size()) throw ParameterError("times and probabilities differ in length");
    SurvivalSeries s;
    s.route = route;
    s.amplitudes.reserve(times.size());
    for (double p : probabilities) s.amplitudes.emplace_back(std::sqrt(std::max(p, 0.0)), 0.0);
    s.times = std::move(times);
    s.probabilities = std::move(probabilities);
    return s;
}

EigenPropagator::EigenPropagator(const TridiagonalHamiltonian& h) {
    const auto n = static_cast<Eigen::Index>(h.size());
    if (n == 1) {
        energies_ = {h.diag()[0]};
        weights_ = {1.0};
        vectors_ = {1.0};
        return;
    }
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(h.diag().data(), n);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(h.offdiag().data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw NumericError("tridiagonal eigensolver did not converge for " + std::to_string(n) + " sites");

    const auto& vecs = solver.eigenvectors();
    energies_.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    vectors_.assign(vecs.data(), vecs.data() + n * n);
    weights_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) weights_[static_cast<std::size_t>(k)] = vecs(0, k) * vecs(0, k);
}

cplx EigenPropagator::amplitude(double t) const { return sum_nodes(energies_, weights_, t); }

std::vector<cplx> EigenPropagator::state(double t) const {
    const std::size_t n = energies_.size();
    std::vector<cplx> psi(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double* col = vectors_.data() + k * n;
        const cplx c = col[0] * std::polar(1.0, -energies_[k] * t);
        for (std::size_t i = 0; i < n; ++i) psi[i] += c * col[i];
    }
    return psi;
}

SurvivalSeries evolve_eigen(const TridiagonalHamiltonian& h, std::span<const double> times) {
    const EigenPropagator prop(h);
    SurvivalSeries s;
    s.route = Route::EigenOracle;
    s.times.assign(times.begin(), times.end());
    for (double t : times) {
        s.amplitudes.push_back(prop.amplitude(t));
        s.probabilities.push_back(std::norm(s.amplitudes.back()));
    }
    if (!times.empty() && h.size() > 1) {
        const double t_max = *std::max_element(times.begin(), times.end());
        const double v = *std::max_element(h.offdiag().begin(), h.offdiag().end());
        if (t_max > 0.0 && h.size() < choose_chain_length(t_max, v, 1.0))
            s.warning = "chain of " + std::to_string(h.size()) + " sites is too short for t_max = " +
                        std::to_string(t_max) + "; finite-size reflections may appear";
    }
    return s;
}

LdosQuadrature::LdosQuadrature(const ChainModel& model, double t_max, QuadratureOptions options)
    : t_max_(t_max) {
    if (classify_resonance(model) != ResonanceClass::WellDefined)
        throw ClassifiedError("LDoS quadrature requires a well-defined resonance", classify_resonance(model));
    if (t_max < 0.0) throw DomainError("t_max must be non-negative");

    static const auto fine = gauss_rule<20>();
    static const auto coarse = gauss_rule<10>();

    const double band = model.bandwidth();
    const double half_band = 0.5 * band;
    double max_width = band / 16.0;
    if (t_max > 0.0) max_width = std::min(max_width, std::numbers::pi / (4.0 * t_max));
    const std::array<double, 3> probe_times{0.0, 0.5 * t_max, t_max};

    std::vector<double> trial_e, trial_w, check_e, check_w;
    for (const EdgeMap map : {EdgeMap{0.0, 1.0}, EdgeMap{band, -1.0}}) {
        // Uniform in energy, then mapped to the edge variable.
        const auto n_init = static_cast<std::size_t>(std::ceil(half_band / max_width));
        std::vector<Panel> stack;
        for (std::size_t i = n_init; i-- > 0;) {
            const double e_lo = half_band * static_cast<double>(i) / static_cast<double>(n_init);
            const double e_hi = half_band * static_cast<double>(i + 1) / static_cast<double>(n_init);
            stack.push_back({std::sqrt(e_lo), std::sqrt(e_hi), 0});
        }
        while (!stack.empty()) {
            const Panel p = stack.back();
            stack.pop_back();
            trial_e.clear(), trial_w.clear(), check_e.clear(), check_w.clear();
            integrate_panel(p, map, model, fine.first, fine.second, trial_e, trial_w);
            integrate_panel(p, map, model, coarse.first, coarse.second, check_e, check_w);
            double err = 0.0;
            for (double t : probe_times)
                err = std::max(err, std::abs(sum_nodes(trial_e, trial_w, t) - sum_nodes(check_e, check_w, t)));
            const double width = std::abs(map.energy(p.hi) - map.energy(p.lo));
            double mass = 0.0;
            for (double w : trial_w) mass += std::abs(w);
            // Below the round-off floor bisection cannot help.
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mass;
            if (err > options.tolerance * width / band && err > floor && p.depth < options.max_bisections) {
                const double mid = 0.5 * (p.lo + p.hi);
                stack.push_back({mid, p.hi, p.depth + 1});
                stack.push_back({p.lo, mid, p.depth + 1});
                continue;
            }
            error_estimate_ += err;
            energies_.insert(energies_.end(), trial_e.begin(), trial_e.end());
            weights_.insert(weights_.end(), trial_w.begin(), trial_w.end());
        }
    }
    if (error_estimate_ > options.tolerance)
        throw NumericError("LDoS quadrature reached only " + std::to_string(error_estimate_) +
                               " absolute accuracy",
                           error_estimate_);
}

cplx LdosQuadrature::amplitude(double t) const {
    if (t > t_max_ * (1.0 + 1e-12))
        throw DomainError("time beyond the panelization range of this quadrature");
    return sum_nodes(energies_, weights_, t);
}

SurvivalSeries survival_from_ldos(const ChainModel& model, std::span<const double> times,
                                  QuadratureOptions options) {
    const double t_max = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    const LdosQuadrature quad(model, t_max, options);
    SurvivalSeries s;
    s.route = Route::LdosQuadrature;
    s.times.assign(times.begin(), times.end());
    for (double t : times) {
        s.amplitudes.push_back(quad.amplitude(t));
        s.probabilities.push_back(std::norm(s.amplitudes.back()));
    }
    return s;
}

std::size_t choose_chain_length(double t_max, double v, double margin) {
    if (!(t_max > 0.0)) throw ParameterError("t_max must be positive");
    if (!(margin >= 1.0)) throw ParameterError("margin must be at least 1");
    return static_cast<std::size_t>(std::ceil(margin * 2.0 * v * t_max)) + 16;
}

} // namespace survival
