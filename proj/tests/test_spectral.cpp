#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "survival/errors.hpp"
#include "survival/propagate.hpp"
#include "survival/spectral.hpp"

using namespace survival;
using doctest::Approx;

TEST_CASE("gamma_of_eps") {
    CHECK(gamma_of_eps(2.0, 1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(gamma_of_eps(0.0, 1.0) == 0.0);
    CHECK(gamma_of_eps(4.0, 1.0) == 0.0);
    CHECK(gamma_of_eps(1.0, 1.0) == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_of_eps(-0.1, 1.0), DomainError);
    CHECK_THROWS_AS(gamma_of_eps(4.1, 1.0), DomainError);
}

TEST_CASE("ldos_1_unperturbed") {
    CHECK(ldos_1_unperturbed(2.0, 1.0) == Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(ldos_1_unperturbed(1.0, 1.0) == Approx(std::sqrt(3.0) / 2.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(ldos_1_unperturbed(-1.0, 1.0) == 0.0);
    CHECK(ldos_1_unperturbed(5.0, 1.0) == 0.0);
    // Semicircle in the variable theta: e = 2 - 2 cos(theta), N1 de = (2/pi) sin^2(theta) dtheta.
    const auto curve = sample_ldos_1(1.0, 4096);
    CHECK(curve.trapezoid() == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("surface self-energy") {
    const auto s = surface_self_energy(2.0, 0.4, 1.0);
    CHECK(s.real() == Approx(0.0).epsilon(1e-15));
    CHECK(s.imag() == Approx(-0.16).epsilon(1e-15));
    // Band centre: -Im Sigma is the golden-rule width pi v0^2 N1(2v).
    CHECK(-s.imag() == Approx(std::numbers::pi * 0.16 * ldos_1_unperturbed(2.0, 1.0)).epsilon(1e-14));

    CHECK(std::abs(surface_self_energy(1e8, 0.4, 1.0)) < 1e-8);
    CHECK(std::abs(surface_self_energy(-1e8, 0.4, 1.0)) < 1e-8);
    for (double e = -10.0; e <= 10.0; e += 0.01) CHECK(surface_self_energy(e, 0.4, 1.0).imag() <= 0.0);

    // The continuation agrees with the retarded function on the real band.
    for (double e : {0.3, 1.0, 2.0, 3.7}) {
        const auto cont = surface_self_energy(std::complex<double>(e, 0.0), 0.4, 1.0);
        CHECK(std::abs(cont - surface_self_energy(e, 0.4, 1.0)) < 1e-14);
    }
}

TEST_CASE("green_00 limits and retardedness") {
    const auto m = build_chain(1.0, 0.4, 1.0);
    for (double e = -6.0; e <= 10.0; e += 0.003) CHECK(green_00(e, m).imag() <= 0.0);

    const auto weak = build_chain(1.0, 1e-6, 1.0);
    CHECK(std::abs(green_00(3.0, weak) - 1.0 / (3.0 - 1.0)) < 1e-10);

    double best_e = 0, best = 0;
    for (double e = 0.0; e <= 4.0; e += 1e-3) {
        const double im = std::abs(green_00(e, m).imag());
        if (im > best) best = im, best_e = e;
    }
    CHECK(best_e == Approx(0.9).epsilon(0.02));
}

TEST_CASE("factorized LDoS equals -Im G00 / pi") {
    for (const auto& m : {build_chain(1.0, 0.4, 1.0), build_chain(1.8, 0.77, 1.0), build_chain(2.0, 0.1, 1.0),
                          build_chain(3.1, 0.6, 1.0), build_chain(1.0, 0.8, 2.0)}) {
        double max_rel = 0.0;
        for (int i = 1; i <= 1000; ++i) {
            const double e = m.bandwidth() * i / 1001.0;
            const double a = ldos_0(e, m);
            const double b = -green_00(e, m).imag() / std::numbers::pi;
            max_rel = std::max(max_rel, std::abs(a - b) / b);
        }
        CHECK(max_rel < 1e-10);
    }
    const auto m = build_chain(1.0, 0.4, 1.0);
    CHECK(ldos_0(0.0, m) == 0.0);
    CHECK(ldos_0(4.0, m) == 0.0);
    CHECK(ldos_0(-1.0, m) == 0.0);
    CHECK_THROWS_AS(ldos_0(1.0, build_chain(2.0, 1.5, 1.0)), ParameterError);
}

TEST_CASE("LDoS sum rule and grid") {
    for (const auto& m : {build_chain(1.0, 0.4, 1.0), build_chain(1.8, 0.77, 1.0), build_chain(2.0, 0.1, 1.0)}) {
        const auto curve = sample_ldos(m);
        CHECK(curve.energies.size() == 4096);
        CHECK(curve.energies.front() == 0.0);
        CHECK(curve.energies.back() == 4.0);
        for (double v : curve.values) CHECK(v >= 0.0);
        CHECK(std::abs(curve.trapezoid() - 1.0) < 1e-6);
    }
    // Narrow resonance: the edge-aware adaptive quadrature still satisfies the sum rule.
    const LdosQuadrature quad(build_chain(1.0, 0.05, 1.0), 0.0);
    CHECK(std::abs(quad.amplitude(0.0) - 1.0) < 1e-9);
}

TEST_CASE("LDoS argmax near the resonance") {
    const auto curve = sample_ldos(build_chain(1.0, 0.4, 1.0));
    const auto it = std::max_element(curve.values.begin(), curve.values.end());
    const auto i = static_cast<std::size_t>(it - curve.values.begin());
    const double step = curve.energies[i + 1] - curve.energies[i];
    // Peak of sqrt(e(4-e)) / ((eps_r - e)^2 + Gamma0^2) from a fine independent scan.
    CHECK(std::abs(curve.energies[i] - 0.908922) <= 2 * step);
    CHECK(std::abs(curve.energies[i] - 0.9) <= 0.01);
}

TEST_CASE("band-centre symmetry") {
    const auto m = build_chain(2.0, 0.4, 1.0);
    for (double x = 0.0; x < 2.0; x += 0.01) CHECK(std::abs(ldos_0(2.0 + x, m) - ldos_0(2.0 - x, m)) < 1e-12);
}

TEST_CASE("resonance closed forms") {
    SUBCASE("weak-coupling set") {
        const auto r = resonance_params(build_chain(1.0, 0.4, 1.0));
        CHECK(r.eps_r == Approx(0.9047619047619048).epsilon(1e-14));
        CHECK(r.gamma0 == Approx(0.14630753805464).epsilon(1e-12));
        CHECK(std::abs(r.eps_r - 0.9) <= 0.01);
        CHECK(std::abs(r.gamma0 - 0.14) <= 0.01);
        CHECK(r.eps_r == 1.0 + r.delta0);
        CHECK(r.gamma_c == Approx(std::sqrt(0.59)).epsilon(1e-15));
        CHECK(r.prefactor_a >= 1.0 - 1e-9);
        CHECK(r.prefactor_a == Approx(1.2033898305084745).epsilon(1e-13));
        CHECK(r.beta == Approx(0.08748264233287).epsilon(1e-12));
        CHECK(r.prefactor_c == Approx(0.0024153307814837).epsilon(1e-12));
    }
    SUBCASE("band centre") {
        for (double v0 : {0.1, 0.4, 0.9}) {
            const auto r = resonance_params(build_chain(2.0, v0, 1.0));
            CHECK(r.delta0 == 0.0);
            CHECK(r.eps_r == 2.0);
            CHECK(r.beta == Approx(1.0).epsilon(1e-15));
        }
    }
    SUBCASE("strong-coupling set") {
        const auto r = resonance_params(build_chain(1.8, 0.77, 1.0));
        CHECK(r.gamma0 > 0.0);
        CHECK(r.gamma_c > 0.0);
        CHECK(r.prefactor_a >= 1.0 - 1e-9);
    }
    SUBCASE("out-of-band model is a classified error") {
        try {
            resonance_params(build_chain(-3.0, 0.4, 1.0));
            FAIL("expected ClassifiedError");
        } catch (const ClassifiedError& e) {
            CHECK(e.classification() == ResonanceClass::OutOfBand);
        }
    }
}

TEST_CASE("weak-coupling limit") {
    double prev_gamma = 1e9, prev_shift = 1e9;
    for (double v0 : {0.2, 0.1, 0.05, 0.025}) {
        const auto r = resonance_params(build_chain(1.0, v0, 1.0));
        CHECK(r.gamma0 < prev_gamma);
        CHECK(std::abs(r.eps_r - 1.0) < prev_shift);
        prev_gamma = r.gamma0;
        prev_shift = std::abs(r.eps_r - 1.0);
    }
    CHECK(prev_gamma < 1e-3);
}

TEST_CASE("pole residue cross-check") {
    for (const auto& m : {build_chain(1.0, 0.4, 1.0), build_chain(1.8, 0.77, 1.0), build_chain(2.0, 0.2, 1.0),
                          build_chain(3.0, 0.5, 1.0)}) {
        const auto r = resonance_params(m);
        CHECK(std::norm(numeric_residue(m)) == Approx(r.prefactor_a).epsilon(1e-7));
    }
}

TEST_CASE("classify_resonance") {
    CHECK(classify_resonance(build_chain(1.0, 0.4, 1.0)) == ResonanceClass::WellDefined);
    CHECK(classify_resonance(build_chain(-3.0, 0.4, 1.0)) == ResonanceClass::OutOfBand);
    CHECK(classify_resonance(build_chain(2.0, 1.5, 1.0)) == ResonanceClass::LocalizedState);
    CHECK(classify_resonance(build_chain(2.0, 1.2, 1.0)) == ResonanceClass::VirtualState);
    for (const auto& m : {build_chain(1.0, 0.4, 1.0), build_chain(-3.0, 0.4, 1.0), build_chain(2.0, 1.5, 1.0)})
        CHECK((classify_resonance(m) == ResonanceClass::WellDefined) == m.well_defined_resonance());
}

TEST_CASE("localized state appears outside the band of a long truncated chain") {
    const auto h = truncate(build_chain(2.0, 1.5, 1.0), 2000);
    const auto n = static_cast<Eigen::Index>(h.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(h.diag().data(), n);
    Eigen::VectorXd o = Eigen::Map<const Eigen::VectorXd>(h.offdiag().data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, o, Eigen::EigenvaluesOnly);
    int outside = 0;
    for (Eigen::Index k = 0; k < n; ++k)
        if (es.eigenvalues()(k) < -1e-3 || es.eigenvalues()(k) > 4.0 + 1e-3) ++outside;
    CHECK(outside >= 1);

    // A virtual-state model has none.
    const auto hv = truncate(build_chain(2.0, 1.2, 1.0), 2000);
    Eigen::VectorXd dv = Eigen::Map<const Eigen::VectorXd>(hv.diag().data(), n);
    Eigen::VectorXd ov = Eigen::Map<const Eigen::VectorXd>(hv.offdiag().data(), n - 1);
    es.computeFromTridiagonal(dv, ov, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) > -1e-3);
    CHECK(es.eigenvalues()(n - 1) < 4.0 + 1e-3);
}
