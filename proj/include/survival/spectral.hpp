// spectral.hpp: closed-form spectral quantities of the semi-infinite chain.
//
// The surface site of a uniform chain (site energy 2v, hopping v) has
//   G11(e) = [(e - 2v)/2 - i Gamma(e)] / v^2,   Gamma(e) = sqrt(e) sqrt(B - e) / 2,
// inside the band [0, B = 4v]. Coupling site 0 through v0 gives
//   G00(e) = 1 / (e - eps0 - v0^2 G11(e)),
// whose local density of states factorizes into a Lorentzian centred at the
// resonance times the unperturbed surface density N1(e).

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "survival/model.hpp"

namespace survival {

enum class ResonanceClass { WellDefined, OutOfBand, LocalizedState, VirtualState };

std::string to_string(ResonanceClass c);

/// Raised by resonance_params when the model has no in-band resonance.
class ClassifiedError : public std::runtime_error {
public:
    ClassifiedError(const std::string& what, ResonanceClass c)
        : std::runtime_error(what), classification_(c) {}
    ResonanceClass classification() const noexcept { return classification_; }

private:
    ResonanceClass classification_;
};

struct Resonance {
    double eps_r;        // resonance energy, eps0 + delta0
    double delta0;       // level shift
    double gamma0;       // half-width of the pole
    double gamma_c;
    double prefactor_a;  // A = |a|^2, a the pole residue
    double beta;         // relative LDoS weight of the two band edges
    double prefactor_c;  // amplitude of the t^-3 tail
    double gamma_at_resonance;  // Gamma(eps_r)
    double bandwidth;
};

/// Gamma(e) = sqrt(e) sqrt(B - e) / 2; throws DomainError outside [0, 4v].
double gamma_of_eps(double eps, double v);

/// Retarded surface self-energy v0^2 G11(e) on the real axis. Outside the band
/// the decaying branch is used, so the value is real and vanishes at infinity.
std::complex<double> surface_self_energy(double eps, double v0, double v);

/// Analytic continuation of the in-band retarded self-energy through the cut
/// into the lower half-plane (second sheet), the sheet hosting the resonance pole.
std::complex<double> surface_self_energy(std::complex<double> z, double v0, double v);

std::complex<double> green_00(double eps, const ChainModel& model);

/// Factorized Lorentzian form of the LDoS at site 0. Zero outside the open band.
/// Requires v0 < v.
double ldos_0(double eps, const ChainModel& model);

/// LDoS of the surface site of the chain without site 0, 16 Gamma(e)/(pi B^2).
double ldos_1_unperturbed(double eps, double v);

ResonanceClass classify_resonance(const ChainModel& model);

/// Throws ClassifiedError unless the model is WellDefined.
Resonance resonance_params(const ChainModel& model);

/// Pole residue a of the LDoS evaluated numerically from the continued
/// Green's function; diagnostic cross-check of Resonance::prefactor_a = |a|^2.
std::complex<double> numeric_residue(const ChainModel& model);

struct LdosCurve {
    std::vector<double> energies;
    std::vector<double> values;

    double trapezoid() const;
};

/// Samples N0 on `points` Chebyshev-spaced energies clustered at both band edges.
LdosCurve sample_ldos(const ChainModel& model, std::size_t points = 4096);

/// Same grid for the unperturbed surface density N1.
LdosCurve sample_ldos_1(double v, std::size_t points = 4096);

} // namespace survival
