// propagate.hpp: two independent numerical routes to the survival amplitude
//
//   <0| exp(-i H t) |0> = sum_k |<0|k>|^2 exp(-i e_k t)        (truncated-chain eigenbasis)
//                       = int_band N0(e) exp(-i e t) de         (Fourier transform of the LDoS)
//
// Both are exact up to solver tolerance; they are used to validate the
// closed forms in `spectral` and `regimes`.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "survival/model.hpp"

namespace survival {

enum class Route { EigenOracle, LdosQuadrature, PiecewiseLaw, Interpolation };

std::string to_string(Route r);
Route route_from_string(const std::string& name);

struct SurvivalSeries {
    std::vector<double> times;
    std::vector<std::complex<double>> amplitudes;
    std::vector<double> probabilities;
    Route route = Route::EigenOracle;
    std::optional<std::string> warning;

    std::size_t size() const noexcept { return times.size(); }
};

/// Builds a series from probabilities alone (amplitude = sqrt(P) + 0i).
SurvivalSeries series_from_probabilities(std::vector<double> times, std::vector<double> probabilities,
                                         Route route);

/// Spectral decomposition of a finite tridiagonal Hamiltonian; reusable across times.
class EigenPropagator {
public:
    explicit EigenPropagator(const TridiagonalHamiltonian& h);

    std::complex<double> amplitude(double t) const;
    double probability(double t) const { return std::norm(amplitude(t)); }

    /// Full state <n|psi(t)> for psi(0) = |0>.
    std::vector<std::complex<double>> state(double t) const;

    const std::vector<double>& energies() const noexcept { return energies_; }
    /// |<0|k>|^2 per eigenstate.
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return energies_.size(); }

private:
    std::vector<double> energies_;
    std::vector<double> weights_;
    std::vector<double> vectors_;  // column-major eigenvectors, n x n
};

SurvivalSeries evolve_eigen(const TridiagonalHamiltonian& h, std::span<const double> times);

struct QuadratureOptions {
    double tolerance = 1e-10;   // absolute, per amplitude
    int gauss_points = 20;      // per panel: 10, 20 or 30
    int max_bisections = 40;
};

/// Panelized quadrature of int N0(e) exp(-i e t) de over the band. Square-root
/// substitutions at both edges; panels no wider than pi/(4 t_max) in energy and
/// refined adaptively until the panel error estimate meets the tolerance.
class LdosQuadrature {
public:
    LdosQuadrature(const ChainModel& model, double t_max, QuadratureOptions options = {});

    std::complex<double> amplitude(double t) const;
    double probability(double t) const { return std::norm(amplitude(t)); }

    double t_max() const noexcept { return t_max_; }
    std::size_t nodes() const noexcept { return energies_.size(); }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double t_max_;
    double error_estimate_ = 0.0;
    std::vector<double> energies_;
    std::vector<double> weights_;  // quadrature weight times N0 times Jacobian
};

SurvivalSeries survival_from_ldos(const ChainModel& model, std::span<const double> times,
                                  QuadratureOptions options = {});

/// Chain length keeping the wavefront (group velocity 2v) away from the far end
/// up to t_max: ceil(margin * 2 v t_max) + 16.
std::size_t choose_chain_length(double t_max, double v, double margin = 1.25);

} // namespace survival
