#include "survival/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "survival/errors.hpp"
#include "survival/io.hpp"
#include "survival/measurement.hpp"
#include "survival/model.hpp"
#include "survival/regimes.hpp"
#include "survival/spectral.hpp"

namespace survival::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kAnalysisStep = 0.005;  // hbar/V, dense grid for regime analysis

Command command_from_string(const std::string& s) {
    if (s == "ldos") return Command::Ldos;
    if (s == "evolve") return Command::Evolve;
    if (s == "regimes") return Command::Regimes;
    if (s == "zeno") return Command::Zeno;
    if (s == "tridiag") return Command::Tridiag;
    throw UsageError("unknown command '" + s + "'");
}

Spacing spacing_from_string(const std::string& s) {
    if (s == "linear") return Spacing::Linear;
    if (s == "log") return Spacing::Log;
    throw UsageError("spacing must be 'linear' or 'log', got '" + s + "'");
}

std::vector<Route> routes_from_names(const std::vector<std::string>& names) {
    std::vector<Route> routes;
    for (const auto& n : names) {
        if (n == "both") {
            routes.push_back(Route::EigenOracle);
            routes.push_back(Route::LdosQuadrature);
            continue;
        }
        try {
            routes.push_back(route_from_string(n));
        } catch (const ParameterError& e) {
            throw UsageError(e.what());
        }
    }
    if (routes.empty()) throw UsageError("at least one route is required");
    return routes;
}

std::string route_slug(Route r) {
    switch (r) {
    case Route::EigenOracle: return "eigen";
    case Route::LdosQuadrature: return "quadrature";
    case Route::PiecewiseLaw: return "piecewise";
    case Route::Interpolation: return "interpolation";
    }
    return "unknown";
}

void validate(const RunConfig& c) {
    const bool inline_model = c.eps0.has_value() || c.v0.has_value();
    if (inline_model && c.star) throw UsageError("conflicting model sources: inline parameters and --star");
    if (c.command == Command::Tridiag) {
        if (!c.star) throw UsageError("tridiag requires --star <path>");
    } else if (!c.star || c.command != Command::Evolve) {
        if (c.star) throw UsageError(to_string(c.command) + " needs an inline chain model, not --star");
        if (!c.eps0 || !c.v0) throw UsageError("chain model requires both --eps0 and --v0");
        try {
            build_chain(*c.eps0, *c.v0, c.v);
        } catch (const ParameterError& e) {
            throw UsageError(std::string("invalid chain model: ") + e.what());
        }
    }
    if (c.star && c.command == Command::Evolve)
        for (Route r : c.routes)
            if (r != Route::EigenOracle) throw UsageError("star models support only the eigen route");
    if (!(c.t_min < c.t_max)) throw UsageError("t_min must be smaller than t_max");
    if (c.points < 2) throw UsageError("points must be at least 2");
    if (c.spacing == Spacing::Log && !(c.t_min > 0.0)) throw UsageError("log spacing needs t_min > 0");
    if (c.command == Command::Zeno && !(c.t_min > 0.0)) throw UsageError("zeno needs positive periods (t_min > 0)");
    if (!(c.tolerances.quadrature > 0.0)) throw UsageError("quadrature tolerance must be positive");
    if (!(c.tolerances.chain_margin >= 1.0)) throw UsageError("chain margin must be at least 1");
    if (!(c.tolerances.zeno_delta >= 0.0 && c.tolerances.zeno_delta < 1.0))
        throw UsageError("zeno delta must lie in [0, 1)");
}

std::vector<std::string> header(const RunConfig& c) {
    std::vector<std::string> lines{"config: " + config_to_json(c).dump()};
    if (c.timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        lines.push_back(std::string("generated: ") + buf);
    }
    return lines;
}

std::ofstream open_artifact(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

ChainModel chain_of(const RunConfig& c) { return build_chain(*c.eps0, *c.v0, c.v); }

std::vector<fs::path> run_ldos(const RunConfig& c, const fs::path& dir) {
    const auto model = chain_of(c);
    LdosCurve curve;
    if (model.v0() < model.v()) {
        curve = sample_ldos(model);
    } else {
        curve = sample_ldos_1(model.v());
        for (std::size_t i = 0; i < curve.energies.size(); ++i)
            curve.values[i] = -green_00(curve.energies[i], model).imag() / std::numbers::pi;
    }
    auto comments = header(c);
    comments.push_back("classification: " + to_string(classify_resonance(model)));
    const fs::path path = dir / "ldos.csv";
    auto out = open_artifact(path);
    io::write_ldos_csv(out, curve, model, comments);
    return {path};
}

std::vector<fs::path> run_evolve(const RunConfig& c, const fs::path& dir) {
    const auto times = time_grid(c);
    std::vector<fs::path> paths;
    auto emit = [&](const SurvivalSeries& s) {
        const fs::path path = dir / ("survival_" + route_slug(s.route) + ".csv");
        auto out = open_artifact(path);
        io::write_series_csv(out, s, header(c));
        paths.push_back(path);
    };
    if (c.star) {
        const auto star = StarModel::from_file(*c.star);
        emit(evolve_eigen(tridiagonalize(star, star.size() + 1), times));
        return paths;
    }
    const auto model = chain_of(c);
    for (Route r : c.routes) {
        switch (r) {
        case Route::EigenOracle:
            emit(evolve_eigen(truncate(model, choose_chain_length(c.t_max, model.v(), c.tolerances.chain_margin)),
                              times));
            break;
        case Route::LdosQuadrature:
            emit(survival_from_ldos(model, times, {.tolerance = c.tolerances.quadrature}));
            break;
        case Route::PiecewiseLaw:
        case Route::Interpolation: {
            const auto oracle = SurvivalOracle::from_model(model, r, c.t_max);
            std::vector<double> p;
            for (double t : times) p.push_back(oracle.probability(t));
            emit(series_from_probabilities(times, std::move(p), r));
            break;
        }
        }
    }
    return paths;
}

std::vector<fs::path> run_regimes(const RunConfig& c, const fs::path& dir) {
    const auto model = chain_of(c);
    RegimeReport report{};
    report.resonance = resonance_params(model);
    report.t_s = t_short(report.resonance, model);
    report.t_r = t_return(report.resonance, model);
    report.a1 = report.t_r.a1;
    report.a2 = report.t_r.a2;
    report.nu = kVanHoveExponent;

    const double horizon = std::max(c.t_max, 2.5 * report.t_r.fixed_point);
    const EigenPropagator prop(truncate(model, choose_chain_length(horizon, model.v(), c.tolerances.chain_margin)));

    const auto n = static_cast<std::size_t>(std::ceil(horizon / kAnalysisStep)) + 1;
    std::vector<double> dense(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
        dense[i] = horizon * static_cast<double>(i) / static_cast<double>(n - 1);
        p[i] = prop.probability(dense[i]);
    }
    const auto series = series_from_probabilities(dense, p, Route::EigenOracle);
    report.t_r_numeric = numeric_return_time(series, report.resonance, model);
    if (auto dip = detect_collapse(series, report.resonance))
        report.collapse = refine_collapse(
            *dip, [&](double t) { return prop.probability(t); }, horizon / static_cast<double>(n - 1),
            report.resonance);

    json doc = to_json(report);
    doc["classification"] = to_string(classify_resonance(model));
    doc["config"] = config_to_json(c);
    const fs::path json_path = dir / "regimes.json";
    {
        auto out = open_artifact(json_path);
        out << doc.dump(2) << '\n';
    }

    const auto times = time_grid(c);
    std::vector<double> user_p;
    for (double t : times) user_p.push_back(prop.probability(t));
    const fs::path rate_path = dir / "gamma_eff.csv";
    auto out = open_artifact(rate_path);
    auto comments = header(c);
    comments.push_back("gamma0: " + io::format_double(report.resonance.gamma0));
    io::write_rate_csv(out, effective_rate(series_from_probabilities(times, std::move(user_p), Route::EigenOracle)),
                       comments);
    return {json_path, rate_path};
}

std::vector<fs::path> run_zeno(const RunConfig& c, const fs::path& dir) {
    const auto model = chain_of(c);
    const auto res = resonance_params(model);
    const auto taus = time_grid(c);
    const auto oracle = SurvivalOracle::from_model(model, c.routes.front(), c.t_max, c.tolerances.chain_margin);
    const auto table = sweep_tau(oracle, res.gamma0, taus, c.tolerances.zeno_delta);
    const fs::path path = dir / "zeno_sweep.csv";
    auto out = open_artifact(path);
    io::write_sweep_csv(out, table, header(c));
    return {path};
}

std::vector<fs::path> run_tridiag(const RunConfig& c, const fs::path& dir) {
    const auto star = StarModel::from_file(*c.star);
    const std::size_t depth = c.depth.value_or(star.size() + 1);
    const auto chain = tridiagonalize(star, depth);
    auto comments = header(c);
    comments.push_back("requested_depth: " + std::to_string(depth));
    comments.push_back("effective_depth: " + std::to_string(chain.size()));
    comments.push_back("second_moment: " + io::format_double(second_moment(star)));
    const fs::path path = dir / "tridiag.csv";
    auto out = open_artifact(path);
    io::write_tridiag_csv(out, chain, comments);
    return {path};
}

} // namespace

std::string to_string(Command c) {
    switch (c) {
    case Command::Ldos: return "ldos";
    case Command::Evolve: return "evolve";
    case Command::Regimes: return "regimes";
    case Command::Zeno: return "zeno";
    case Command::Tridiag: return "tridiag";
    }
    return "unknown";
}

std::string to_string(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

json config_to_json(const RunConfig& c) {
    json j;
    j["command"] = to_string(c.command);
    j["eps0"] = c.eps0 ? json(*c.eps0) : json(nullptr);
    j["v0"] = c.v0 ? json(*c.v0) : json(nullptr);
    j["v"] = c.v;
    j["star"] = c.star ? json(*c.star) : json(nullptr);
    j["t_min"] = c.t_min;
    j["t_max"] = c.t_max;
    j["points"] = c.points;
    j["spacing"] = to_string(c.spacing);
    json routes = json::array();
    for (Route r : c.routes) routes.push_back(to_string(r));
    j["routes"] = routes;
    j["out"] = c.out;
    j["depth"] = c.depth ? json(*c.depth) : json(nullptr);
    j["timestamp"] = c.timestamp;
    j["tolerances"] = {{"quadrature", c.tolerances.quadrature},
                       {"chain_margin", c.tolerances.chain_margin},
                       {"zeno_delta", c.tolerances.zeno_delta}};
    return j;
}

RunConfig config_from_json(const json& doc, RunConfig c) {
    if (!doc.is_object()) throw UsageError("configuration must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "command") c.command = command_from_string(value.get<std::string>());
            else if (key == "eps0") c.eps0 = value.is_null() ? std::nullopt : std::optional(value.get<double>());
            else if (key == "v0") c.v0 = value.is_null() ? std::nullopt : std::optional(value.get<double>());
            else if (key == "v") c.v = value.get<double>();
            else if (key == "star") c.star = value.is_null() ? std::nullopt : std::optional(value.get<std::string>());
            else if (key == "t_min") c.t_min = value.get<double>();
            else if (key == "t_max") c.t_max = value.get<double>();
            else if (key == "points") c.points = value.get<std::size_t>();
            else if (key == "spacing") c.spacing = spacing_from_string(value.get<std::string>());
            else if (key == "routes" || key == "route") {
                c.routes = routes_from_names(value.is_array() ? value.get<std::vector<std::string>>()
                                                              : std::vector<std::string>{value.get<std::string>()});
            } else if (key == "out") c.out = value.get<std::string>();
            else if (key == "depth") c.depth = value.is_null() ? std::nullopt : std::optional(value.get<std::size_t>());
            else if (key == "timestamp") c.timestamp = value.get<bool>();
            else if (key == "tolerances") {
                for (const auto& [tk, tv] : value.items()) {
                    if (tk == "quadrature") c.tolerances.quadrature = tv.get<double>();
                    else if (tk == "chain_margin") c.tolerances.chain_margin = tv.get<double>();
                    else if (tk == "zeno_delta") c.tolerances.zeno_delta = tv.get<double>();
                    else throw UsageError("unknown tolerance '" + tk + "'");
                }
            } else {
                throw UsageError("unknown configuration key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad configuration value: ") + e.what());
    }
    return c;
}

RunConfig config_from_artifact(const fs::path& path) {
    for (const auto& line : io::read_comments(path.string())) {
        if (line.rfind("config: ", 0) == 0) {
            try {
                return config_from_json(json::parse(line.substr(8)));
            } catch (const json::exception& e) {
                throw UsageError(std::string("malformed embedded config: ") + e.what());
            }
        }
    }
    throw UsageError("no embedded config in " + path.string());
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Survival probability of a local excitation coupled to a semi-infinite chain", "survival"};
    app.require_subcommand(1, 1);

    double eps0 = 0, v0 = 0, v = 1, t_min = 0, t_max = 0, tol_quad = 0, margin = 0, delta = 0;
    std::size_t points = 0, depth = 0;
    std::string star, spacing, out, config_path;
    std::vector<std::string> routes;
    bool no_timestamp = false;

    struct Flags {
        CLI::Option *eps0, *v0, *v, *star, *t_min, *t_max, *points, *spacing, *route, *out, *config, *no_ts, *depth,
            *tol_quad, *margin, *delta;
    };
    std::vector<std::pair<CLI::App*, Flags>> subs;
    for (const char* name : {"ldos", "evolve", "regimes", "zeno", "tridiag"}) {
        auto* sub = app.add_subcommand(name);
        Flags f{};
        f.eps0 = sub->add_option("--eps0", eps0, "site-0 energy [V]");
        f.v0 = sub->add_option("--v0", v0, "surface hopping [V]");
        f.v = sub->add_option("--v", v, "bulk hopping");
        f.star = sub->add_option("--star", star, "star-model JSON file");
        f.t_min = sub->add_option("--t-min", t_min, "first time [hbar/V]");
        f.t_max = sub->add_option("--t-max", t_max, "last time [hbar/V]");
        f.points = sub->add_option("--points", points, "number of grid points");
        f.spacing = sub->add_option("--spacing", spacing, "linear or log");
        f.route = sub->add_option("--route", routes, "eigen, quadrature, piecewise, interpolation or both");
        f.out = sub->add_option("--out", out, "output directory");
        f.config = sub->add_option("--config", config_path, "JSON configuration file");
        f.no_ts = sub->add_flag("--no-timestamp", no_timestamp, "omit the generation timestamp");
        f.depth = sub->add_option("--depth", depth, "recursion depth for tridiag");
        f.tol_quad = sub->add_option("--tol-quadrature", tol_quad, "absolute quadrature tolerance");
        f.margin = sub->add_option("--chain-margin", margin, "chain-length safety factor");
        f.delta = sub->add_option("--zeno-delta", delta, "Zeno/anti-Zeno classification band");
        subs.emplace_back(sub, f);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (const auto& [sub, f] : subs) {
        if (!sub->parsed()) continue;
        RunConfig c;
        const Command cmd = command_from_string(sub->get_name());
        if (f.config->count()) {
            std::ifstream in(config_path);
            if (!in) throw UsageError("cannot open config file " + config_path);
            json doc;
            try {
                in >> doc;
            } catch (const json::exception& e) {
                throw UsageError("malformed JSON in " + config_path + ": " + e.what());
            }
            c = config_from_json(doc);
            if (doc.contains("command") && c.command != cmd)
                throw UsageError("config file command '" + to_string(c.command) + "' does not match '" +
                                 sub->get_name() + "'");
        }
        c.command = cmd;
        if (f.eps0->count()) c.eps0 = eps0;
        if (f.v0->count()) c.v0 = v0;
        if (f.v->count()) c.v = v;
        if (f.star->count()) c.star = star;
        if (f.t_min->count()) c.t_min = t_min;
        if (f.t_max->count()) c.t_max = t_max;
        if (f.points->count()) c.points = points;
        if (f.spacing->count()) c.spacing = spacing_from_string(spacing);
        if (f.route->count()) c.routes = routes_from_names(routes);
        if (f.out->count()) c.out = out;
        if (f.no_ts->count()) c.timestamp = false;
        if (f.depth->count()) c.depth = depth;
        if (f.tol_quad->count()) c.tolerances.quadrature = tol_quad;
        if (f.margin->count()) c.tolerances.chain_margin = margin;
        if (f.delta->count()) c.tolerances.zeno_delta = delta;
        validate(c);
        return c;
    }
    throw UsageError("no command given");
}

std::vector<double> time_grid(const RunConfig& c) {
    std::vector<double> t(c.points);
    const double n = static_cast<double>(c.points - 1);
    for (std::size_t i = 0; i < c.points; ++i) {
        const double x = static_cast<double>(i) / n;
        t[i] = c.spacing == Spacing::Linear ? c.t_min + (c.t_max - c.t_min) * x
                                            : c.t_min * std::pow(c.t_max / c.t_min, x);
    }
    t.back() = c.t_max;
    return t;
}

std::vector<fs::path> run(const RunConfig& config) {
    const fs::path dir(config.out);
    fs::create_directories(dir);
    switch (config.command) {
    case Command::Ldos: return run_ldos(config, dir);
    case Command::Evolve: return run_evolve(config, dir);
    case Command::Regimes: return run_regimes(config, dir);
    case Command::Zeno: return run_zeno(config, dir);
    case Command::Tridiag: return run_tridiag(config, dir);
    }
    return {};
}

int main(const std::vector<std::string>& args) {
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& h) {
        std::cout << h.what();
        return kExitSuccess;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        for (const auto& path : run(config)) std::cout << path.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitSuccess;
}

} // namespace survival::cli
