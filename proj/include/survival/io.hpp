// io.hpp: CSV writers. Every file starts with `#`-prefixed comment lines;
// floating-point values carry 17 significant digits.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "survival/measurement.hpp"
#include "survival/model.hpp"
#include "survival/propagate.hpp"
#include "survival/regimes.hpp"
#include "survival/spectral.hpp"

namespace survival::io {

std::string format_double(double x);

void write_comments(std::ostream& out, const std::vector<std::string>& comments);

/// `energy,ldos` with a `# model: eps0=...,v0=...,v=...` line.
void write_ldos_csv(std::ostream& out, const LdosCurve& curve, const ChainModel& model,
                    const std::vector<std::string>& comments = {});

/// `t,re_amp,im_amp,p00` with a `# route: ...` line.
void write_series_csv(std::ostream& out, const SurvivalSeries& series, const std::vector<std::string>& comments = {});

/// `t,gamma_eff`; masked samples are written as `nan`.
void write_rate_csv(std::ostream& out, const RateTrace& trace, const std::vector<std::string>& comments = {});

/// `tau,gamma_meas,gamma0,class`
void write_sweep_csv(std::ostream& out, const SweepTable& table, const std::vector<std::string>& comments = {});

/// `site,diag,offdiag`; the last site has an empty offdiag field.
void write_tridiag_csv(std::ostream& out, const TridiagonalHamiltonian& h,
                       const std::vector<std::string>& comments = {});

/// Comment lines (without the leading `#` and one space) of a CSV file.
std::vector<std::string> read_comments(const std::string& path);

} // namespace survival::io
