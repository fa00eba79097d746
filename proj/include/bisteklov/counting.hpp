#pragma once

// Counting functions, Weyl-type leading terms with explicit constants,
// phase-space volumes and second-coefficient (sharpness) analysis.

#include <boost/math/quadrature/gauss.hpp>
#include <gmpxx.h>

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisteklov/boundary_weight.hpp"
#include "bisteklov/problem.hpp"
#include "bisteklov/spectra.hpp"
#include "bisteklov/symbols.hpp"

namespace bisteklov {

/// Volume ω_k of the unit ball in R^k, via ω_k = (2π/k) ω_{k-2} from ω_0 = 1, ω_1 = 2.
inline double unit_ball_volume(int k) {
    if (k < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
    double omega = (k % 2 == 0) ? 1.0 : 2.0;
    for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) omega *= 2.0 * std::numbers::pi / j;
    return omega;
}

// ---------------------------------------------------------------------------
// Counting

/// Number of eigenvalues <= tau, with multiplicity.
inline mpz_class count_upto(const Spectrum& spectrum, double tau) {
    mpz_class count = 0;
    for (const auto& e : spectrum.entries) {
        if (e.value > tau) break;
        count += e.multiplicity;
    }
    return count;
}

/// Inclusive count against an exact threshold given as tau^power
/// (tau itself for power 1, tau³ for DirichletTrace spectra).
inline mpz_class count_upto_exact(const Spectrum& spectrum, const mpq_class& tau_power) {
    mpz_class count = 0;
    for (const auto& e : spectrum.entries) {
        if (mpq_class(e.exact_power) > tau_power) break;
        count += e.multiplicity;
    }
    return count;
}

/// Σ_{k<=m} N(n, k) on the unit ball in closed form: C(n+m-1, n-1) + C(n+m-2, n-1).
inline mpz_class ball_count_closed(int n, int m) {
    if (n < 2 || m < 0) throw std::invalid_argument("ball_count_closed: need n >= 2, m >= 0");
    return binomial(n + m - 1, n - 1) + binomial(n + m - 2, n - 1);
}

// ---------------------------------------------------------------------------
// Weyl leading term

/// 4π for NeumannTrace, 16^{1/3}π for DirichletTrace, 2π for HarmonicSteklov.
inline double denominator_base(ProblemKind problem) {
    switch (problem) {
        case ProblemKind::NeumannTrace: return 4.0 * std::numbers::pi;
        case ProblemKind::DirichletTrace: return std::cbrt(16.0) * std::numbers::pi;
        case ProblemKind::HarmonicSteklov: return 2.0 * std::numbers::pi;
    }
    throw std::logic_error("denominator_base: unknown problem kind");
}

/// C_lead = ω_{n-1} ∫ρ^{n-1} ds / base^{n-1}, so that count(τ) ≈ C_lead τ^{n-1}.
inline double weyl_leading(ProblemKind problem, int n, double boundary_integral) {
    if (n < 2) throw std::invalid_argument("weyl_leading: need n >= 2");
    if (!(boundary_integral > 0.0))
        throw std::domain_error("weyl_leading: boundary integral must be positive");
    return unit_ball_volume(n - 1) * boundary_integral / std::pow(denominator_base(problem), n - 1);
}

struct WeylModel {
    int n;
    ProblemKind problem;
    double boundary_integral;
    double c_lead;
    double base;

    static WeylModel make(ProblemKind problem, int n, double boundary_integral) {
        return {n, problem, boundary_integral, weyl_leading(problem, n, boundary_integral),
                denominator_base(problem)};
    }

    double predicted(double tau) const { return c_lead * std::pow(tau, n - 1); }
};

/// ∫ (ρ + ε)^{n-1} ds by tensor-product composite Gauss–Legendre quadrature
/// (10 nodes per panel, `panels` panels per parameter direction).
inline double boundary_integral(const BoundaryWeight& weight, int n, int panels) {
    if (panels < 1) throw std::invalid_argument("boundary_integral: panels must be >= 1");
    if (n < 2) throw std::invalid_argument("boundary_integral: need n >= 2");
    const int dims = weight.boundary_dim();
    if (dims < 1) throw std::invalid_argument("boundary_integral: weight has no parametrization");
    using Rule = boost::math::quadrature::gauss<double, 10>;

    // 1-D composite nodes and weights per direction.
    std::vector<std::vector<double>> nodes(dims), weights(dims);
    for (int d = 0; d < dims; ++d) {
        const auto [lo, hi] = weight.box[d];
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * width;
            const double half = 0.5 * width;
            const auto& abscissa = Rule::abscissa();
            const auto& w = Rule::weights();
            for (std::size_t k = 0; k < abscissa.size(); ++k) {
                const double offsets[2] = {abscissa[k], -abscissa[k]};
                const int copies = abscissa[k] == 0.0 ? 1 : 2;
                for (int c = 0; c < copies; ++c) {
                    nodes[d].push_back(mid + half * offsets[c]);
                    weights[d].push_back(half * w[k]);
                }
            }
        }
    }

    std::vector<std::size_t> index(dims, 0);
    std::vector<double> point(dims);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (int d = 0; d < dims; ++d) {
            point[d] = nodes[d][index[d]];
            w *= weights[d][index[d]];
        }
        total += w * std::pow(weight.regularized(point), n - 1) * weight.area_element(point);
        int d = 0;
        while (d < dims && ++index[d] == nodes[d].size()) index[d++] = 0;
        if (d == dims) break;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Phase-space volume

enum class VolumeMethod { Closed, MonteCarlo };

struct PhaseVolume {
    double value;
    double standard_error;  // 0 for the closed form
};

namespace detail {

inline void require_homogeneous(const HomogeneousSymbol& s, std::span<const double> x, int dim) {
    if (!(s.degree() > 0.0))
        throw std::invalid_argument("phase volume: symbol degree must be positive");
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss;
    std::vector<double> eta(dim);
    for (int trial = 0; trial < 4; ++trial) {
        for (double& v : eta) v = gauss(rng);
        for (double t : {0.5, 3.0}) {
            if (homogeneity_defect(s, x, eta, t) > 1e-9)
                throw std::invalid_argument("phase volume: symbol '" + s.label() +
                                            "' is not positively homogeneous");
        }
    }
}

}  // namespace detail

/// ∫_{ {η' : p(x', η') < 1} } dξ*, with dξ* = √det(g^{jk}(x')) dη' the metric measure on
/// the cotangent fiber of `metric`.
///
/// Closed form requires an ellipsoidal symbol c(x')(Σ g^{jk}η_jη_k)^{d/2} over the same
/// metric and gives ω_{n-1} c^{-(n-1)/d}. Monte Carlo samples a bounding box uniformly
/// with a seeded mt19937_64 and reports the binomial standard error.
inline PhaseVolume hormander_phase_volume(const HomogeneousSymbol& symbol,
                                          const BoundaryMetric& metric,
                                          std::span<const double> x, VolumeMethod method,
                                          std::size_t samples = 1'000'000,
                                          std::uint64_t seed = 0) {
    const int dim = metric.dim();
    detail::require_homogeneous(symbol, x, dim);
    const Eigen::MatrixXd g = metric.g_inv(x);

    if (method == VolumeMethod::Closed) {
        const auto& ell = symbol.ellipsoid();
        if (!ell) throw std::invalid_argument("phase volume: closed form needs an ellipsoidal symbol");
        if (ell->metric && !ell->metric->g_inv(x).isApprox(g, 1e-14))
            throw std::invalid_argument("phase volume: symbol metric differs from measure metric");
        const double c = ell->coefficient(x);
        if (!(c > 0.0)) throw std::invalid_argument("phase volume: nonpositive symbol coefficient");
        return {unit_ball_volume(dim) * std::pow(c, -dim / symbol.degree()), 0.0};
    }

    if (samples == 0) throw std::invalid_argument("phase volume: samples must be positive");
    const double measure = std::sqrt(g.determinant());

    // Half-widths of the bounding box.
    std::vector<double> half(dim);
    const auto& ell = symbol.ellipsoid();
    if (ell && (!ell->metric || ell->metric->g_inv(x).isApprox(g, 1e-14))) {
        const double radius = std::pow(ell->coefficient(x), -1.0 / symbol.degree());
        const Eigen::MatrixXd g_lower = g.inverse();
        for (int j = 0; j < dim; ++j) half[j] = radius * std::sqrt(g_lower(j, j));
    } else {
        // Radial extent p(θ)^{-1/d} sampled over directions, widened by 2x.
        std::mt19937_64 probe(seed ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> gauss;
        std::vector<double> dir(dim);
        double reach = 0.0;
        for (int k = 0; k < 4096; ++k) {
            double norm = 0.0;
            for (double& v : dir) {
                v = gauss(probe);
                norm += v * v;
            }
            norm = std::sqrt(norm);
            for (double& v : dir) v /= norm;
            reach = std::max(reach, std::pow(symbol.eval(x, dir), -1.0 / symbol.degree()));
        }
        std::fill(half.begin(), half.end(), 2.0 * reach);
    }

    double box_volume = 1.0;
    for (double h : half) box_volume *= 2.0 * h;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> eta(dim);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        bool origin = true;
        for (int j = 0; j < dim; ++j) {
            eta[j] = half[j] * unit(rng);
            origin = origin && eta[j] == 0.0;
        }
        if (origin || symbol.eval(x, eta) < 1.0) ++hits;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    const double scale = box_volume * measure;
    return {scale * frac, scale * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

/// Closed-form variant that takes the measure metric from the symbol itself.
inline PhaseVolume hormander_phase_volume(const HomogeneousSymbol& symbol,
                                          std::span<const double> x, VolumeMethod method,
                                          std::size_t samples = 1'000'000,
                                          std::uint64_t seed = 0) {
    if (!symbol.ellipsoid() || !symbol.ellipsoid()->metric)
        throw std::invalid_argument("phase volume: symbol carries no metric; pass one explicitly");
    return hormander_phase_volume(symbol, *symbol.ellipsoid()->metric, x, method, samples, seed);
}

// ---------------------------------------------------------------------------
// Remainder analysis

struct CountingSample {
    double tau;
    mpz_class count;
};

/// Samples of a counting function; τ strictly increasing, counts nondecreasing.
struct CountingSeries {
    std::vector<CountingSample> samples;

    void validate() const {
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (!(samples[i - 1].tau < samples[i].tau))
                throw std::invalid_argument("CountingSeries: tau must be strictly increasing");
            if (samples[i].count < samples[i - 1].count)
                throw std::invalid_argument("CountingSeries: counts must be nondecreasing");
        }
    }

    /// One sample at every eigenvalue of the spectrum (inclusive counts).
    static CountingSeries at_eigenvalues(const Spectrum& spectrum, double value_scale = 1.0) {
        CountingSeries series;
        mpz_class running = 0;
        for (const auto& e : spectrum.entries) {
            running += e.multiplicity;
            series.samples.push_back({e.value * value_scale, running});
        }
        return series;
    }
};

struct RemainderPoint {
    double tau;
    double residual;  // (count - C_lead τ^{n-1}) / τ^{n-2}
};

struct RemainderReport {
    double second_coeff_estimate;
    double trend_slope;  // d(residual)/d(log τ) over the last decade
    std::vector<RemainderPoint> residual_series;
    bool sharp_verdict;
    double tolerance_used;
};

/// Scaled residual (count - C_lead τ^{n-1}) / τ^{n-2}.
inline double scaled_residual(const WeylModel& model, double tau, const mpz_class& count) {
    return (count.get_d() - model.predicted(tau)) / std::pow(tau, model.n - 2);
}

/// Second-coefficient estimate: the scaled residual at the largest τ. The trend slope
/// compares it with the sample nearest a decade below. Default tolerance 0.1·C_lead.
inline RemainderReport remainder_fit(const CountingSeries& series, const WeylModel& model,
                                     double tolerance = -1.0) {
    series.validate();
    std::vector<const CountingSample*> positive;
    for (const auto& s : series.samples)
        if (s.tau > 0.0) positive.push_back(&s);
    if (positive.size() < 10)
        throw std::invalid_argument("remainder_fit: need at least 10 samples with tau > 0");
    const double tau_min = positive.front()->tau;
    const double tau_max = positive.back()->tau;
    if (tau_max < 10.0 * tau_min)
        throw std::invalid_argument("remainder_fit: samples must span at least one decade");

    auto nearest = [&](double target) {
        return *std::min_element(positive.begin(), positive.end(), [&](auto* a, auto* b) {
            return std::abs(std::log(a->tau / target)) < std::abs(std::log(b->tau / target));
        });
    };
    const CountingSample* last = positive.back();
    const CountingSample* decade = nearest(tau_max / 10.0);

    // Growth exponent over the last decade must match the model dimension.
    if (decade->count > 0 && last->count > decade->count) {
        const double growth = std::log(last->count.get_d() / decade->count.get_d()) /
                              std::log(last->tau / decade->tau);
        if (std::abs(growth - (model.n - 1)) > 0.5)
            throw std::invalid_argument("remainder_fit: counts grow like tau^" +
                                        std::to_string(growth) + ", inconsistent with n = " +
                                        std::to_string(model.n));
    }

    RemainderReport report{};
    report.tolerance_used = tolerance >= 0.0 ? tolerance : 0.1 * model.c_lead;
    for (const auto* s : positive)
        report.residual_series.push_back({s->tau, scaled_residual(model, s->tau, s->count)});
    const double r_last = report.residual_series.back().residual;
    const double r_decade = scaled_residual(model, decade->tau, decade->count);
    report.second_coeff_estimate = r_last;
    report.trend_slope = (r_last - r_decade) / std::log(last->tau / decade->tau);
    report.sharp_verdict = std::abs(r_last) > report.tolerance_used;
    return report;
}

/// |1/(2^{n-2}(n-1)!) - ω_{n-1} n ω_n / (4π)^{n-1}|; zero by the Gamma duplication formula.
inline double gamma_identity_check(int n) {
    if (n < 2) throw std::invalid_argument("gamma_identity_check: need n >= 2");
    const double lhs = 1.0 / (std::pow(2.0, n - 2) * std::tgamma(static_cast<double>(n)));
    const double rhs = unit_ball_volume(n - 1) * n * unit_ball_volume(n) /
                       std::pow(4.0 * std::numbers::pi, n - 1);
    return std::abs(lhs - rhs);
}

}  // namespace bisteklov
