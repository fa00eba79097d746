#pragma once

// Command-line front end. Every command writes one CSV document (header row first)
// and returns a process exit code: 0 success, 2 validation failure, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisteklov/counting.hpp"
#include "bisteklov/csv.hpp"
#include "bisteklov/halfspace.hpp"
#include "bisteklov/problem.hpp"
#include "bisteklov/spectra.hpp"
#include "bisteklov/symbols.hpp"
#include "bisteklov/weight_expr.hpp"

namespace bisteklov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Command { Spectrum, Weyl, Halfspace, Symbol, IdentityCheck };

struct RunConfig {
    Command command = Command::Spectrum;
    int n = 2;
    int m_max = 10;
    ProblemKind problem = ProblemKind::NeumannTrace;
    std::string rho = "1";
    double epsilon = 0.0;
    // half-space
    std::string mode = "bvp";  // bvp | kernel
    double h = 1.0 / 512.0;
    double h_coarse = 1.0 / 64.0;
    double L = 30.0;
    std::vector<double> eta{1.0};
    std::vector<double> a_tan;  // row-major; empty means identity
    double a_nn = 1.0;
    bool random_block = false;
    int points = 128;
    // quadrature and sampling
    int panels = 8;
    int quad_points = kDefaultCircleNodes;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::vector<double> x;  // boundary point for `symbol`; empty means the origin
    std::string out;        // empty means standard output
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

inline WeightExpr parse_rho(const RunConfig& cfg) {
    try {
        return WeightExpr::parse(cfg.rho);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

/// Constant density required by the closed-form spectra.
inline double constant_rho(const RunConfig& cfg) {
    const auto c = parse_rho(cfg).constant_value();
    require(c.has_value(), "closed-form spectra need a constant --rho, got '" + cfg.rho + "'");
    require(*c > 0.0, "--rho must be positive");
    return *c;
}

inline void validate_domain(const RunConfig& cfg) {
    require(cfg.m_max >= 0, "--m-max must be >= 0");
    if (cfg.problem == ProblemKind::NeumannTrace)
        require(cfg.n >= 2, "--n must be >= 2 for the ball problem p1");
    else
        require(cfg.n == 2, "problems p2 and harmonic are available on the unit disk only (--n 2)");
}

inline Spectrum unit_spectrum(const RunConfig& cfg) {
    switch (cfg.problem) {
        case ProblemKind::NeumannTrace: return ball_spectrum_p1(cfg.n, cfg.m_max);
        case ProblemKind::DirichletTrace: return disk_spectrum_p2(cfg.m_max);
        case ProblemKind::HarmonicSteklov: return disk_spectrum_harmonic(cfg.m_max);
    }
    throw std::logic_error("unknown problem kind");
}

inline MetricBlock metric_block(const RunConfig& cfg) {
    if (cfg.random_block) return random_metric_block(cfg.n, cfg.seed);
    const int d = cfg.n - 1;
    MetricBlock block = MetricBlock::identity(cfg.n);
    if (!cfg.a_tan.empty()) {
        require(static_cast<int>(cfg.a_tan.size()) == d * d,
                "--a-tan needs (n-1)^2 row-major entries");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) block.a_tan(i, j) = cfg.a_tan[i * d + j];
    }
    block.a_nn = cfg.a_nn;
    try {
        block.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return block;
}

/// Summary rows start with "summary" and carry key=value pairs in the remaining columns.
inline void summary_row(std::ostream& os, std::vector<std::string> fields, std::size_t width) {
    fields.insert(fields.begin(), "summary");
    fields.resize(width);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv::field(fields[i]);
    }
    os << '\n';
}

}  // namespace detail

/// `spectrum`: closed-form eigenvalues with multiplicities and running counts.
inline void cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
    detail::validate_domain(cfg);
    const double c = detail::constant_rho(cfg);
    const Spectrum spectrum = detail::unit_spectrum(cfg);
    spectrum.validate();
    os << "index,value,multiplicity,cumulative_count\n";
    mpz_class running = 0;
    for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
        const auto& e = spectrum.entries[i];
        running += e.multiplicity;
        // A constant density c rescales every eigenvalue by 1/c.
        csv::row(os, {csv::integer(static_cast<long long>(i)), csv::real(e.value / c),
                      csv::integer(e.multiplicity), csv::integer(running)});
    }
}

/// `weyl`: counts against the leading Weyl term and the second-coefficient summary.
inline void cmd_weyl(const RunConfig& cfg, std::ostream& os) {
    detail::validate_domain(cfg);
    const WeightExpr rho = detail::parse_rho(cfg);
    detail::require(cfg.panels >= 1, "--panels must be >= 1");
    detail::require(cfg.epsilon >= 0.0, "--eps must be >= 0");

    // Boundary integral of (ρ + ε)^{n-1} over the unit sphere; t is the azimuthal angle.
    double integral = 0.0;
    const auto constant = rho.constant_value();
    if (constant) {
        detail::require(*constant + cfg.epsilon > 0.0, "--rho must be positive");
        integral = std::pow(*constant + cfg.epsilon, cfg.n - 1) * cfg.n * unit_ball_volume(cfg.n);
    } else {
        const auto weight = BoundaryWeight::unit_sphere(
            cfg.n, [rho](std::span<const double> p) { return rho(p.back()); }, cfg.epsilon);
        try {
            integral = boundary_integral(weight, cfg.n, cfg.panels);
        } catch (const std::domain_error& e) {
            throw ValidationError(e.what());
        }
    }
    const WeylModel model = WeylModel::make(cfg.problem, cfg.n, integral);

    os << "tau,count,predicted,residual_scaled\n";
    if (!constant) {
        // No closed-form spectrum for a variable density: report the prediction only.
        for (int k = 1; k <= cfg.m_max; ++k)
            csv::row(os, {csv::real(k), "", csv::real(model.predicted(k)), ""});
        detail::summary_row(os, {"c_lead=" + csv::real(model.c_lead), "second_coeff_estimate=NA",
                                 "sharp_verdict=NA"},
                            4);
        return;
    }

    const double c = *constant + cfg.epsilon;
    const Spectrum spectrum = detail::unit_spectrum(cfg);
    const CountingSeries series = CountingSeries::at_eigenvalues(spectrum, 1.0 / c);
    for (const auto& s : series.samples) {
        const double tau = s.tau;
        const double residual = scaled_residual(model, tau, s.count);
        csv::row(os, {csv::real(tau), csv::integer(s.count), csv::real(model.predicted(tau)),
                      csv::real(residual)});
    }
    try {
        const RemainderReport report = remainder_fit(series, model);
        detail::summary_row(os,
                            {"second_coeff_estimate=" + csv::real(report.second_coeff_estimate),
                             "trend_slope=" + csv::real(report.trend_slope),
                             "sharp_verdict=" + csv::boolean(report.sharp_verdict)},
                            4);
    } catch (const std::invalid_argument&) {
        detail::summary_row(os, {"second_coeff_estimate=NA", "trend_slope=NA", "sharp_verdict=NA"},
                            4);
    }
}

/// `halfspace`: symbol recovery on a refinement ladder (bvp mode) or kernel versus
/// Fourier synthesis on Gaussian data (kernel mode).
inline void cmd_halfspace(const RunConfig& cfg, std::ostream& os) {
    detail::require(cfg.problem != ProblemKind::HarmonicSteklov,
                    "halfspace supports --problem p1 or p2");
    detail::require(cfg.n >= 2, "--n must be >= 2");
    const MetricBlock block = detail::metric_block(cfg);
    os << "h,recovered,target,rel_error\n";

    if (cfg.mode == "bvp") {
        detail::require(static_cast<int>(cfg.eta.size()) == cfg.n - 1, "--eta needs n-1 entries");
        detail::require(cfg.h > 0.0 && cfg.h_coarse >= cfg.h, "need 0 < --h <= --h-coarse");
        const FourierDatum datum{cfg.eta, {1.0, 0.0}};
        double k = 0.0;
        try {
            k = xi_norm(block, datum.eta);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
        detail::require(cfg.L * k >= kMinDecayLengths, "--L too short: L|xi'| must be >= 20");
        const bool p1 = cfg.problem == ProblemKind::NeumannTrace;
        const double target =
            p1 ? halfspace_target_p1(block, datum.eta) : halfspace_target_p2(block, datum.eta);
        std::vector<double> errors;
        for (double h = cfg.h_coarse; h >= cfg.h * (1.0 - 1e-12); h /= 2.0) {
            const HalfSpaceGrid grid{h, cfg.L};
            try {
                (void)grid.intervals();
            } catch (const std::invalid_argument& e) {
                throw ValidationError(e.what());
            }
            const BvpResult r = p1 ? bvp_solve_p1(block, datum, grid) : bvp_solve_p2(block, datum, grid);
            const double rel = std::abs(r.recovered - target) / std::abs(target);
            errors.push_back(rel);
            csv::row(os, {csv::real(h), csv::real(r.recovered), csv::real(target), csv::real(rel)});
        }
        if (errors.size() >= 2) {
            const double ratio = errors[errors.size() - 2] / errors.back();
            detail::summary_row(os, {"observed_order=" + csv::real(std::log2(ratio)),
                                     "ratio=" + csv::real(ratio)},
                                4);
        } else {
            detail::summary_row(os, {"observed_order=NA", "ratio=NA"}, 4);
        }
        return;
    }

    detail::require(cfg.mode == "kernel", "--mode must be bvp or kernel");
    detail::require(cfg.n == 2, "kernel mode is available for --n 2");
    detail::require(cfg.points >= 8, "--points must be >= 8");
    const bool p1 = cfg.problem == ProblemKind::NeumannTrace;
    std::vector<std::vector<double>> eval;
    for (int i = 0; i <= 16; ++i) eval.push_back({-4.0 + 0.5 * i, 1.0});
    double last_abs = 0.0;
    for (int points = 32; points <= cfg.points; points *= 2) {
        const double half_width = 8.0;
        const double spacing = 2.0 * half_width / (points - 1);
        BoundaryData data{{-half_width}, spacing, {points}, {}, {}};
        const auto gauss = BoundaryData::sample(data.origin, spacing, data.counts,
                                                [](const std::vector<double>& y) {
                                                    return std::exp(-y[0] * y[0]);
                                                });
        const std::vector<double> zero(gauss.size(), 0.0);
        data.phi = p1 ? zero : gauss;
        data.h = p1 ? gauss : zero;
        const auto by_kernel = solve_by_kernel(block, data, eval, cfg.quad_points);
        const auto by_fourier = fourier_synthesis(block, data, eval);
        double dev = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < eval.size(); ++i) {
            dev = std::max(dev, std::abs(by_kernel[i] - by_fourier[i]));
            scale = std::max(scale, std::abs(by_fourier[i]));
        }
        last_abs = dev;
        csv::row(os, {csv::real(spacing), csv::real(by_kernel[8]), csv::real(by_fourier[8]),
                      csv::real(dev / scale)});
        if (points * 2 > cfg.points) break;
    }
    detail::summary_row(os, {"max_abs_deviation=" + csv::real(last_abs)}, 4);
}

/// `symbol`: Steklov symbol value and fiber phase volume (closed form and Monte Carlo).
inline void cmd_symbol(const RunConfig& cfg, std::ostream& os) {
    detail::require(cfg.n >= 2, "--n must be >= 2");
    const int dim = cfg.n - 1;
    detail::require(static_cast<int>(cfg.eta.size()) == dim, "--eta needs n-1 entries");
    detail::require(cfg.x.empty() || static_cast<int>(cfg.x.size()) == dim, "--x needs n-1 entries");
    detail::require(cfg.samples > 0, "--samples must be positive");
    detail::require(cfg.epsilon >= 0.0, "--eps must be >= 0");
    const WeightExpr rho = detail::parse_rho(cfg);
    const std::vector<double> x = cfg.x.empty() ? std::vector<double>(dim, 0.0) : cfg.x;

    std::shared_ptr<const BoundaryMetric> metric;
    try {
        if (cfg.a_tan.empty()) {
            metric = std::make_shared<const BoundaryMetric>(BoundaryMetric::identity(dim));
        } else {
            detail::require(static_cast<int>(cfg.a_tan.size()) == dim * dim,
                            "--a-tan needs (n-1)^2 row-major entries");
            Eigen::MatrixXd g(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) g(i, j) = cfg.a_tan[i * dim + j];
            metric = std::make_shared<const BoundaryMetric>(BoundaryMetric::constant(g));
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }

    BoundaryWeight weight{{}, {}, [rho](std::span<const double> p) { return rho(p[0]); }, cfg.epsilon};
    double value = 0.0;
    try {
        value = symbol_steklov(cfg.problem, *metric, weight, x, cfg.eta);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    } catch (const std::domain_error& e) {
        throw ValidationError(e.what());
    }
    const HomogeneousSymbol symbol = make_steklov_symbol(cfg.problem, metric, weight);
    const PhaseVolume closed = hormander_phase_volume(symbol, x, VolumeMethod::Closed);
    const PhaseVolume mc =
        hormander_phase_volume(symbol, x, VolumeMethod::MonteCarlo, cfg.samples, cfg.seed);

    os << "problem,n,symbol_value,phase_volume_closed,phase_volume_montecarlo,standard_error\n";
    csv::row(os, {std::string(to_string(cfg.problem)), csv::integer(cfg.n), csv::real(value),
                  csv::real(closed.value), csv::real(mc.value), csv::real(mc.standard_error)});
}

/// `identity-check`: Gamma-function identity residual and exact ball-count identity
/// for n = 2 .. --n.
inline void cmd_identity_check(const RunConfig& cfg, std::ostream& os) {
    detail::require(cfg.n >= 2, "--n must be >= 2");
    detail::require(cfg.m_max >= 0, "--m-max must be >= 0");
    os << "n,gamma_identity_residual,ball_count_identity\n";
    for (int n = 2; n <= cfg.n; ++n) {
        bool ok = true;
        mpz_class running = 0;
        for (int m = 0; m <= cfg.m_max && ok; ++m) {
            running += harmonic_dim(n, m);
            ok = running == ball_count_closed(n, m);
        }
        csv::row(os, {csv::integer(n), csv::real(gamma_identity_check(n)), csv::boolean(ok)});
    }
}

/// Runs a validated configuration, writing CSV to `os` and diagnostics to `err`.
inline int dispatch(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    try {
        switch (cfg.command) {
            case Command::Spectrum: cmd_spectrum(cfg, os); break;
            case Command::Weyl: cmd_weyl(cfg, os); break;
            case Command::Halfspace: cmd_halfspace(cfg, os); break;
            case Command::Symbol: cmd_symbol(cfg, os); break;
            case Command::IdentityCheck: cmd_identity_check(cfg, os); break;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const SolverError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ResourceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

/// Parses `args` (without the program name) and runs the selected subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Biharmonic Steklov spectra, Weyl counting laws and half-space symbol checks",
                 "bisteklov"};
    app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file mirroring the flags (flags win)");

    RunConfig cfg;
    std::string problem = "p1";
    std::string h_text, h_coarse_text;
    app.add_option("--problem", problem, "p1 | p2 | harmonic")
        ->check(CLI::IsMember({"p1", "p2", "harmonic"}));
    app.add_option("--n", cfg.n, "space dimension");
    app.add_option("--m-max", cfg.m_max, "largest harmonic degree");
    app.add_option("--rho", cfg.rho, "boundary density: constant or expression in t");
    app.add_option("--eps", cfg.epsilon, "density regularizer");
    app.add_option("--h", h_text, "finest grid step (number or 1/k)");
    app.add_option("--h-coarse", h_coarse_text, "coarsest grid step of the ladder");
    app.add_option("--L", cfg.L, "half-line truncation length");
    app.add_option("--eta", cfg.eta, "tangential covector")->delimiter(',');
    app.add_option("--a-tan", cfg.a_tan, "row-major tangential block")->delimiter(',');
    app.add_option("--a-nn", cfg.a_nn, "normal coefficient");
    app.add_flag("--random-block", cfg.random_block, "seeded random coefficient block");
    app.add_option("--mode", cfg.mode, "halfspace mode: bvp | kernel")
        ->check(CLI::IsMember({"bvp", "kernel"}));
    app.add_option("--points", cfg.points, "largest kernel-mode data grid");
    app.add_option("--panels", cfg.panels, "quadrature panels per direction");
    app.add_option("--quad-points", cfg.quad_points, "circle quadrature nodes");
    app.add_option("--samples", cfg.samples, "Monte Carlo samples");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--x", cfg.x, "boundary point for `symbol`")->delimiter(',');
    app.add_option("--out", cfg.out, "output path (default: standard output)");

    auto* spectrum = app.add_subcommand("spectrum", "closed-form spectrum");
    auto* weyl = app.add_subcommand("weyl", "counting function versus Weyl prediction");
    auto* halfspace = app.add_subcommand("halfspace", "half-space symbol recovery");
    auto* symbol = app.add_subcommand("symbol", "principal symbol and phase volume");
    auto* identity = app.add_subcommand("identity-check", "Gamma and binomial identities");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    auto parse_step = [&](const std::string& text, double& target) {
        if (text.empty()) return;
        const auto slash = text.find('/');
        if (slash == std::string::npos) {
            target = std::stod(text);
        } else {
            target = std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
        }
    };
    try {
        parse_step(h_text, cfg.h);
        parse_step(h_coarse_text, cfg.h_coarse);
    } catch (const std::exception&) {
        err << "error: --h and --h-coarse take a number or a fraction like 1/512\n";
        return kExitValidation;
    }
    cfg.problem = parse_problem_kind(problem);
    if (*spectrum) cfg.command = Command::Spectrum;
    if (*weyl) cfg.command = Command::Weyl;
    if (*halfspace) cfg.command = Command::Halfspace;
    if (*symbol) cfg.command = Command::Symbol;
    if (*identity) cfg.command = Command::IdentityCheck;

    if (cfg.out.empty()) return dispatch(cfg, out, err);
    std::ostringstream buffer;
    const int code = dispatch(cfg, buffer, err);
    if (code != kExitOk) return code;
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        err << "error: cannot open " << cfg.out << " for writing\n";
        return kExitValidation;
    }
    file << buffer.str();
    return kExitOk;
}

}  // namespace bisteklov::cli
