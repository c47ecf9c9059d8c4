#include "survival/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "survival/errors.hpp"

namespace survival::io {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
}

void write_ldos_csv(std::ostream& out, const LdosCurve& curve, const ChainModel& model,
                    const std::vector<std::string>& comments) {
    out << "# model: eps0=" << format_double(model.eps0()) << ",v0=" << format_double(model.v0())
        << ",v=" << format_double(model.v()) << '\n';
    write_comments(out, comments);
    out << "energy,ldos\n";
    for (std::size_t i = 0; i < curve.energies.size(); ++i)
        out << format_double(curve.energies[i]) << ',' << format_double(curve.values[i]) << '\n';
}

void write_series_csv(std::ostream& out, const SurvivalSeries& series, const std::vector<std::string>& comments) {
    out << "# route: " << to_string(series.route) << '\n';
    write_comments(out, comments);
    if (series.warning) out << "# warning: " << *series.warning << '\n';
    out << "t,re_amp,im_amp,p00\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << format_double(series.times[i]) << ',' << format_double(series.amplitudes[i].real()) << ','
            << format_double(series.amplitudes[i].imag()) << ',' << format_double(series.probabilities[i]) << '\n';
}

void write_rate_csv(std::ostream& out, const RateTrace& trace, const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "t,gamma_eff\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        out << format_double(trace.times[i]) << ','
            << (trace.valid[i] ? format_double(trace.rates[i]) : std::string("nan")) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepTable& table, const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "# argmax_tau: " << format_double(table.rows.empty() ? NAN : table.rows[table.argmax].tau) << '\n';
    out << "tau,gamma_meas,gamma0,class\n";
    for (const auto& row : table.rows)
        out << format_double(row.tau) << ','
            << (row.rate.infinite ? std::string("inf") : format_double(row.rate.rate)) << ','
            << format_double(table.gamma0) << ',' << to_string(row.cls) << '\n';
}

void write_tridiag_csv(std::ostream& out, const TridiagonalHamiltonian& h, const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "site,diag,offdiag\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
        out << i << ',' << format_double(h.diag()[i]) << ',';
        if (i < h.offdiag().size()) out << format_double(h.offdiag()[i]);
        out << '\n';
    }
}

std::vector<std::string> read_comments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path);
    std::vector<std::string> comments;
    std::string line;
    while (std::getline(in, line) && !line.empty() && line[0] == '#')
        comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
    return comments;
}

} // namespace survival::io
