#include "survival/spectral.hpp"

#include <cmath>
#include <numbers>

#include "survival/errors.hpp"

namespace survival {

namespace {

using cplx = std::complex<double>;

struct ClosedForm {
    double f;         // v0^2 / (v^2 - v0^2)
    double detuning;  // (eps0 - 2v) / 2
    double gamma_c_sq;
};

ClosedForm closed_form(const ChainModel& m) {
    const double v2 = m.v() * m.v();
    const double v02 = m.v0() * m.v0();
    const double detuning = 0.5 * (m.eps0() - 2.0 * m.v());
    return {v02 / (v2 - v02), detuning, v2 - v02 - detuning * detuning};
}

bool in_band(double eps, double v) { return eps >= 0.0 && eps <= 4.0 * v; }

bool has_bound_state(const ChainModel& m) {
    const double pull = m.v0() * m.v0() / m.v();
    return pull > m.eps0() || pull > 4.0 * m.v() - m.eps0();
}

std::vector<double> chebyshev_band_grid(double band, std::size_t points) {
    if (points < 2) throw ParameterError("LDoS grid needs at least two points");
    std::vector<double> e(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(points - 1);
        e[i] = 0.5 * band * (1.0 - std::cos(theta));
    }
    e.front() = 0.0;
    e.back() = band;
    return e;
}

} // namespace

std::string to_string(ResonanceClass c) {
    switch (c) {
    case ResonanceClass::WellDefined: return "WellDefined";
    case ResonanceClass::OutOfBand: return "OutOfBand";
    case ResonanceClass::LocalizedState: return "LocalizedState";
    case ResonanceClass::VirtualState: return "VirtualState";
    }
    return "Unknown";
}

double gamma_of_eps(double eps, double v) {
    if (!in_band(eps, v)) throw DomainError("energy outside the band [0, 4v]");
    return 0.5 * std::sqrt(eps) * std::sqrt(4.0 * v - eps);
}

cplx surface_self_energy(double eps, double v0, double v) {
    const double scale = v0 * v0 / (v * v);
    const double x = eps - 2.0 * v;
    if (in_band(eps, v)) return scale * cplx(0.5 * x, -gamma_of_eps(eps, v));
    // Decaying branch: |G11| -> 0 as |eps| -> infinity.
    const double root = std::sqrt(x * x - 4.0 * v * v);
    return scale * cplx(0.5 * (x - std::copysign(root, x)), 0.0);
}

cplx surface_self_energy(cplx z, double v0, double v) {
    const cplx x = z - 2.0 * v;
    return v0 * v0 / (v * v) * 0.5 * (x - cplx(0.0, 1.0) * std::sqrt(4.0 * v * v - x * x));
}

cplx green_00(double eps, const ChainModel& model) {
    return 1.0 / (eps - model.eps0() - surface_self_energy(eps, model.v0(), model.v()));
}

double ldos_1_unperturbed(double eps, double v) {
    if (!in_band(eps, v)) return 0.0;
    const double band = 4.0 * v;
    return 16.0 * gamma_of_eps(eps, v) / (std::numbers::pi * band * band);
}

double ldos_0(double eps, const ChainModel& model) {
    if (!(model.v0() < model.v())) throw ParameterError("factorized LDoS requires v0 < v");
    if (!in_band(eps, model.v())) return 0.0;
    const auto cf = closed_form(model);
    const double eps_r = model.eps0() + cf.f * cf.detuning;
    // (V^2 / Gamma_c) Gamma_0 = V^2 f; Gamma_0^2 = f^2 Gamma_c^2.
    const double lorentz = (eps_r - eps) * (eps_r - eps) + cf.f * cf.f * cf.gamma_c_sq;
    return model.v() * model.v() * cf.f / lorentz * ldos_1_unperturbed(eps, model.v());
}

ResonanceClass classify_resonance(const ChainModel& model) {
    if (model.v0() < model.v()) {
        return closed_form(model).gamma_c_sq > 0.0 ? ResonanceClass::WellDefined
                                                   : ResonanceClass::OutOfBand;
    }
    return has_bound_state(model) ? ResonanceClass::LocalizedState : ResonanceClass::VirtualState;
}

Resonance resonance_params(const ChainModel& model) {
    const auto cls = classify_resonance(model);
    if (cls != ResonanceClass::WellDefined)
        throw ClassifiedError("no well-defined in-band resonance (" + to_string(cls) + ")", cls);

    const auto cf = closed_form(model);
    const double v = model.v();
    const double v02 = model.v0() * model.v0();
    const double band = model.bandwidth();

    Resonance r{};
    r.bandwidth = band;
    r.delta0 = cf.f * cf.detuning;
    r.eps_r = model.eps0() + r.delta0;
    r.gamma_c = std::sqrt(cf.gamma_c_sq);
    r.gamma0 = cf.f * r.gamma_c;
    const double g2 = r.gamma0 * r.gamma0;
    const double lower_sq = r.eps_r * r.eps_r + g2;                       // |eps_r - eps_L|^2 + Gamma0^2
    const double upper_sq = (band - r.eps_r) * (band - r.eps_r) + g2;    // |eps_U - eps_r|^2 + Gamma0^2
    r.beta = lower_sq / upper_sq;
    r.prefactor_a = std::sqrt(lower_sq) * std::sqrt(upper_sq) / (4.0 * cf.gamma_c_sq);
    r.gamma_at_resonance = gamma_of_eps(r.eps_r, v);
    const double dv2 = v * v - v02;
    r.prefactor_c = v02 * v02 * v * std::pow(r.gamma_at_resonance, 3) * (1.0 + r.beta * r.beta) /
                    (4.0 * std::numbers::pi * dv2 * dv2 * lower_sq * lower_sq);
    return r;
}

cplx numeric_residue(const ChainModel& model) {
    const auto r = resonance_params(model);
    const cplx pole(r.eps_r, -r.gamma0);
    auto scaled_green = [&](cplx h) {
        const cplx z = pole + h;
        return h / (z - model.eps0() - surface_self_energy(z, model.v0(), model.v()));
    };
    const double h = 1e-5 * (1.0 + std::abs(pole));
    // Symmetric differences cancel the O(h) term of (z - z_p) G(z).
    const cplx res = 0.25 * (scaled_green({h, 0.0}) + scaled_green({-h, 0.0}) +
                             scaled_green({0.0, h}) + scaled_green({0.0, -h}));
    // N0 continued below the band is (G^A - G^R)/(2 pi i) and only G^R carries the
    // pole, so a = 2 pi i Res N0 = -Res G^R.
    return -res;
}

double LdosCurve::trapezoid() const {
    double sum = 0.0;
    for (std::size_t i = 1; i < energies.size(); ++i)
        sum += 0.5 * (values[i] + values[i - 1]) * (energies[i] - energies[i - 1]);
    return sum;
}

LdosCurve sample_ldos(const ChainModel& model, std::size_t points) {
    LdosCurve curve{chebyshev_band_grid(model.bandwidth(), points), {}};
    curve.values.reserve(points);
    for (double e : curve.energies) curve.values.push_back(ldos_0(e, model));
    return curve;
}

LdosCurve sample_ldos_1(double v, std::size_t points) {
    LdosCurve curve{chebyshev_band_grid(4.0 * v, points), {}};
    curve.values.reserve(points);
    for (double e : curve.energies) curve.values.push_back(ldos_1_unperturbed(e, v));
    return curve;
}

} // namespace survival
