// model.hpp: tight-binding Hamiltonians and the recursion-method mapping
// from a star environment onto an equivalent chain.
//
// Units: hbar = 1; energies in units of the bulk hopping V, times in hbar/V.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace survival {

/// Semi-infinite chain: site 0 with energy eps0, coupled by v0 to a uniform
/// chain of site energy 2v and hopping v. The continuum is [0, 4v].
class ChainModel {
public:
    ChainModel(double eps0, double v0, double v);

    double eps0() const noexcept { return eps0_; }
    double v0() const noexcept { return v0_; }
    double v() const noexcept { return v_; }
    double hbar() const noexcept { return 1.0; }
    double band_lower() const noexcept { return 0.0; }
    double band_upper() const noexcept { return 4.0 * v_; }
    double bandwidth() const noexcept { return 4.0 * v_; }

    /// v0 < v and the resonance lies inside the band.
    bool well_defined_resonance() const noexcept { return well_defined_; }

    friend bool operator==(const ChainModel&, const ChainModel&) = default;

private:
    double eps0_;
    double v0_;
    double v_;
    bool well_defined_;
};

ChainModel build_chain(double eps0, double v0, double v = 1.0);

/// A level eps0 coupled to N discrete environment levels.
class StarModel {
public:
    StarModel(double eps0, std::vector<double> couplings, std::vector<double> level_energies);

    double eps0() const noexcept { return eps0_; }
    const std::vector<double>& couplings() const noexcept { return couplings_; }
    const std::vector<double>& level_energies() const noexcept { return level_energies_; }
    std::size_t size() const noexcept { return couplings_.size(); }

    /// Spread of the environment levels, max - min.
    double bandwidth() const;

    /// `{"eps0": f, "levels": [{"energy": f, "coupling": f}, ...]}`
    static StarModel from_json(const nlohmann::json& doc);
    static StarModel from_file(const std::string& path);
    nlohmann::json to_json() const;

private:
    double eps0_;
    std::vector<double> couplings_;
    std::vector<double> level_energies_;
};

/// Finite symmetric tridiagonal Hamiltonian; hoppings are stored as positive magnitudes.
class TridiagonalHamiltonian {
public:
    TridiagonalHamiltonian(std::vector<double> diag, std::vector<double> offdiag);

    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& offdiag() const noexcept { return offdiag_; }
    std::size_t size() const noexcept { return diag_.size(); }

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
};

/// diag = [eps0, 2v, 2v, ...], offdiag = [v0, v, v, ...].
TridiagonalHamiltonian truncate(const ChainModel& model, std::size_t n_sites);

/// Lanczos recursion started on the central level, with full reorthogonalization.
/// Returns at most `depth` sites; fewer when the Krylov space closes earlier
/// (degenerate levels), in which case size() is the effective depth.
TridiagonalHamiltonian tridiagonalize(const StarModel& star, std::size_t depth);

/// Local second moment of the Hamiltonian at the central level, sum_j |V_0j|^2.
double second_moment(const StarModel& star);

} // namespace survival
