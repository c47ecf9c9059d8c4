#include "survival/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "survival/errors.hpp"

namespace survival {

namespace {

// Relative residual below which the Krylov space is considered closed.
constexpr double kLanczosBreakdown = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// y = H x for the star Hamiltonian in the basis {|0>, |1>, ..., |N>}.
void apply_star(const StarModel& star, std::span<const double> x, std::span<double> y) {
    const auto& c = star.couplings();
    const auto& e = star.level_energies();
    double y0 = star.eps0() * x[0];
    for (std::size_t j = 0; j < c.size(); ++j) {
        y0 += c[j] * x[j + 1];
        y[j + 1] = c[j] * x[0] + e[j] * x[j + 1];
    }
    y[0] = y0;
}

} // namespace

ChainModel::ChainModel(double eps0, double v0, double v) : eps0_(eps0), v0_(v0), v_(v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("bulk hopping v must be positive");
    if (!(v0 > 0.0) || !std::isfinite(v0)) throw ParameterError("surface hopping v0 must be positive");
    if (!std::isfinite(eps0)) throw ParameterError("eps0 must be finite");
    const double detuning = 0.5 * (eps0 - 2.0 * v);
    well_defined_ = v0 < v && (v * v - v0 * v0 - detuning * detuning) > 0.0;
}

ChainModel build_chain(double eps0, double v0, double v) { return ChainModel(eps0, v0, v); }

StarModel::StarModel(double eps0, std::vector<double> couplings, std::vector<double> level_energies)
    : eps0_(eps0), couplings_(std::move(couplings)), level_energies_(std::move(level_energies)) {
    if (couplings_.empty()) throw ParameterError("star model needs at least one environment level");
    if (couplings_.size() != level_energies_.size())
        throw ParameterError("couplings and level energies differ in length");
    if (std::none_of(couplings_.begin(), couplings_.end(), [](double c) { return c != 0.0; }))
        throw ParameterError("all couplings vanish: the central level is decoupled");
}

double StarModel::bandwidth() const {
    auto [lo, hi] = std::minmax_element(level_energies_.begin(), level_energies_.end());
    return *hi - *lo;
}

StarModel StarModel::from_json(const nlohmann::json& doc) {
    try {
        std::vector<double> couplings;
        std::vector<double> energies;
        for (const auto& level : doc.at("levels")) {
            energies.push_back(level.at("energy").get<double>());
            couplings.push_back(level.at("coupling").get<double>());
        }
        return StarModel(doc.at("eps0").get<double>(), std::move(couplings), std::move(energies));
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed star model: ") + e.what());
    }
}

StarModel StarModel::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open star model file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("malformed JSON in " + path + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json StarModel::to_json() const {
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t j = 0; j < size(); ++j)
        levels.push_back({{"energy", level_energies_[j]}, {"coupling", couplings_[j]}});
    return {{"eps0", eps0_}, {"levels", levels}};
}

TridiagonalHamiltonian::TridiagonalHamiltonian(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty()) throw ParameterError("tridiagonal Hamiltonian needs at least one site");
    if (offdiag_.size() + 1 != diag_.size())
        throw ParameterError("offdiag must have exactly one entry less than diag");
    for (double t : offdiag_)
        if (!(t > 0.0)) throw ParameterError("hoppings must be strictly positive magnitudes");
}

TridiagonalHamiltonian truncate(const ChainModel& model, std::size_t n_sites) {
    if (n_sites < 2) throw ParameterError("truncated chain needs at least two sites");
    std::vector<double> diag(n_sites, 2.0 * model.v());
    std::vector<double> offdiag(n_sites - 1, model.v());
    diag[0] = model.eps0();
    offdiag[0] = model.v0();
    return {std::move(diag), std::move(offdiag)};
}

double second_moment(const StarModel& star) {
    double m2 = 0.0;
    for (double c : star.couplings()) m2 += c * c;
    return m2;
}

TridiagonalHamiltonian tridiagonalize(const StarModel& star, std::size_t depth) {
    const std::size_t dim = star.size() + 1;
    if (depth == 0) throw ParameterError("recursion depth must be at least 1");
    if (depth > dim) throw ParameterError("recursion depth exceeds N + 1 for a star of N levels");

    const auto& c = star.couplings();
    double scale = std::abs(star.eps0());
    for (std::size_t j = 0; j < c.size(); ++j)
        scale = std::max({scale, std::abs(c[j]), std::abs(star.level_energies()[j])});

    std::vector<double> diag{star.eps0()};
    std::vector<double> offdiag;
    if (depth == 1) return {std::move(diag), std::move(offdiag)};

    // Lanczos basis, one row per chain site.
    std::vector<std::vector<double>> basis;
    basis.emplace_back(dim, 0.0);
    basis[0][0] = 1.0;

    // First step in closed form: |1~> = sum_j V_0j |j> / V~_0.
    const double v0_tilde = std::sqrt(second_moment(star));
    offdiag.push_back(v0_tilde);
    std::vector<double> q1(dim, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) q1[j + 1] = c[j] / v0_tilde;
    basis.push_back(std::move(q1));

    std::vector<double> w(dim);
    while (basis.size() <= depth) {
        const std::size_t k = basis.size() - 1;
        const auto& q = basis[k];
        apply_star(star, q, w);
        const double alpha = dot(q, w);
        diag.push_back(alpha);
        if (basis.size() == depth) break;

        for (std::size_t i = 0; i < dim; ++i) w[i] -= alpha * q[i] + offdiag[k - 1] * basis[k - 1][i];
        // Full reorthogonalization, two passes.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                const double overlap = dot(b, w);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= overlap * b[i];
            }
        }
        const double beta = std::sqrt(dot(w, w));
        if (beta < kLanczosBreakdown * std::max(1.0, scale)) break;
        offdiag.push_back(beta);
        std::vector<double> next(dim);
        for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / beta;
        basis.push_back(std::move(next));
    }
    return {std::move(diag), std::move(offdiag)};
}

} // namespace survival
