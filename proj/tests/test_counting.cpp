#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "bisteklov/counting.hpp"
#include "oracles.hpp"

using namespace bisteklov;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> flat(const Spectrum& s) {
    std::vector<std::pair<double, long>> e;
    for (const auto& x : s.entries) e.emplace_back(x.value, x.multiplicity.get_si());
    return oracle::expand(e);
}

}  // namespace

TEST(CountUpto, Examples) {
    EXPECT_EQ(count_upto(ball_spectrum_p1(2, 10), 6.0), 5);
    EXPECT_EQ(oracle::count_le(flat(ball_spectrum_p1(2, 10)), 6.0), 5);
    EXPECT_EQ(count_upto(ball_spectrum_p1(3, 10), 2.9), 0);
    EXPECT_EQ(count_upto(disk_spectrum_p2(5), -1.0), 0);
    EXPECT_EQ(count_upto(disk_spectrum_p2(5), std::cbrt(4.0)), 3);
    EXPECT_EQ(count_upto_exact(disk_spectrum_p2(5), 4), 3);
    EXPECT_EQ(count_upto_exact(disk_spectrum_p2(5), mpq_class(399, 100)), 1);
}

TEST(CountUpto, AgreesWithBruteForce) {
    for (int n = 2; n <= 5; ++n) {
        const auto s = ball_spectrum_p1(n, 12);
        const auto values = flat(s);
        for (double tau = 0.0; tau < 30.0; tau += 0.37)
            EXPECT_EQ(count_upto(s, tau), oracle::count_le(values, tau));
    }
    const auto p2 = disk_spectrum_p2(40);
    const auto values = flat(p2);
    for (double tau = 0.0; tau < 20.0; tau += 0.11) EXPECT_EQ(count_upto(p2, tau), oracle::count_le(values, tau));
}

TEST(BallCountClosed, Examples) {
    EXPECT_EQ(ball_count_closed(2, 3), 7);
    EXPECT_EQ(ball_count_closed(3, 2), 9);
    EXPECT_EQ(ball_count_closed(4, 0), 1);
}

TEST(BallCountClosed, OracleEquivalenceAndBinomialIdentity) {
    for (int n = 2; n <= 6; ++n) {
        const auto s = ball_spectrum_p1(n, 200);
        mpz_class running = 0;
        for (int m = 0; m <= 200; ++m) {
            running += s.entries[m].multiplicity;
            const mpz_class closed = ball_count_closed(n, m);
            ASSERT_EQ(running, closed);
            ASSERT_EQ(count_upto(ball_spectrum_p1(n, m), n + 2 * m), closed);
            ASSERT_EQ(2 * oracle::choose(n + m - 1, n - 1) - oracle::choose(n + m - 2, n - 2),
                      oracle::choose(n + m - 1, n - 1) + oracle::choose(n + m - 2, n - 1));
        }
    }
    EXPECT_EQ(ball_count_closed(6, 200), oracle::choose(205, 5) + oracle::choose(204, 5));
    // Far outside 64 bits.
    EXPECT_EQ(ball_count_closed(40, 200), oracle::choose(239, 39) + oracle::choose(238, 39));
}

TEST(WeylLeading, Examples) {
    EXPECT_NEAR(weyl_leading(ProblemKind::NeumannTrace, 2, 2 * kPi), 1.0, 1e-12);
    EXPECT_NEAR(weyl_leading(ProblemKind::DirichletTrace, 2, 2 * kPi), std::cbrt(4.0), 1e-12);
    EXPECT_NEAR(weyl_leading(ProblemKind::NeumannTrace, 3, 4 * kPi), 0.25, 1e-14);
    EXPECT_NEAR(weyl_leading(ProblemKind::HarmonicSteklov, 2, 2 * kPi), 2.0, 1e-14);
    EXPECT_THROW(weyl_leading(ProblemKind::NeumannTrace, 2, 0.0), std::domain_error);
    EXPECT_THROW(weyl_leading(ProblemKind::NeumannTrace, 2, -1.0), std::domain_error);
}

TEST(WeylLeading, GammaFormulaForBallVolume) {
    for (int k = 0; k <= 12; ++k) EXPECT_NEAR(unit_ball_volume(k), oracle::ball_volume(k), 1e-13);
}

TEST(BoundaryIntegral, Examples) {
    const auto one = BoundaryWeight::unit_circle([](std::span<const double>) { return 1.0; });
    EXPECT_NEAR(boundary_integral(one, 2, 4), 2 * kPi, 1e-12);

    for (int n = 2; n <= 5; ++n) {
        const double c = 1.7;
        const auto w = BoundaryWeight::unit_sphere(n, [c](std::span<const double>) { return c; });
        const double area = n * oracle::ball_volume(n);
        EXPECT_NEAR(boundary_integral(w, n, 4), std::pow(c, n - 1) * area, 1e-10) << n;
    }

    const auto bump = BoundaryWeight::unit_circle([](std::span<const double> t) { return 2 + std::cos(t[0]); });
    EXPECT_NEAR(boundary_integral(bump, 2, 8), 4 * kPi, 1e-10);
}

TEST(BoundaryIntegral, Errors) {
    const auto neg = BoundaryWeight::unit_circle([](std::span<const double> t) { return std::cos(t[0]); });
    EXPECT_THROW(boundary_integral(neg, 2, 4), std::domain_error);
    const auto one = BoundaryWeight::unit_circle([](std::span<const double>) { return 1.0; });
    EXPECT_THROW(boundary_integral(one, 2, 0), std::invalid_argument);
}

TEST(BoundaryIntegral, DeterministicForFixedPanels) {
    const auto w = BoundaryWeight::unit_sphere(3, [](std::span<const double> p) { return 1.5 + std::sin(p[1]); });
    EXPECT_EQ(boundary_integral(w, 3, 6), boundary_integral(w, 3, 6));
}

TEST(PhaseVolume, ClosedFormExamples) {
    for (int n : {2, 3}) {
        auto metric = std::make_shared<const BoundaryMetric>(BoundaryMetric::identity(n - 1));
        const auto sym = make_steklov_symbol(ProblemKind::NeumannTrace, metric, BoundaryWeight::constant_density(1.0));
        const std::vector<double> x(n - 1, 0.0);
        const double expected = n == 2 ? 1.0 : kPi / 4;
        EXPECT_NEAR(hormander_phase_volume(sym, x, VolumeMethod::Closed).value, expected, 1e-14);
    }
}

TEST(PhaseVolume, ClosedFormMatchesIndependentMonteCarlo) {
    // p2 symbol with ρ = 1.3, anisotropic metric; oracle samples a plain box in η.
    Eigen::MatrixXd g(2, 2);
    g << 2.0, 0.3, 0.3, 0.7;
    auto metric = std::make_shared<const BoundaryMetric>(BoundaryMetric::constant(g));
    const auto sym = make_steklov_symbol(ProblemKind::DirichletTrace, metric, BoundaryWeight::constant_density(1.3));
    const std::vector<double> x{0.2, -0.1};
    const double closed = hormander_phase_volume(sym, x, VolumeMethod::Closed).value;
    EXPECT_NEAR(closed, oracle::ball_volume(2) * std::pow(1.3 / std::cbrt(2.0), 2), 1e-12);
    auto p = [&](const std::vector<double>& eta) {
        return (eta[0] == 0 && eta[1] == 0) ? 0.0 : sym.eval(x, eta);
    };
    auto [raw, se] = oracle::mc_volume(p, 2, 3.0, 400000, 11);
    const double measure = std::sqrt(g.determinant());
    EXPECT_NEAR(raw * measure, closed, 4 * se * measure);
}

TEST(PhaseVolume, MonteCarloReproducibleAndWithinErrors) {
    auto metric = std::make_shared<const BoundaryMetric>(BoundaryMetric::identity(2));
    const auto sym = make_steklov_symbol(ProblemKind::NeumannTrace, metric, BoundaryWeight::constant_density(1.0));
    const std::vector<double> x{0.0, 0.0};
    const auto a = hormander_phase_volume(sym, x, VolumeMethod::MonteCarlo, 200000, 5);
    const auto b = hormander_phase_volume(sym, x, VolumeMethod::MonteCarlo, 200000, 5);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.standard_error, b.standard_error);
    EXPECT_NEAR(a.value, kPi / 4, 3 * a.standard_error);
    const auto c = hormander_phase_volume(sym, x, VolumeMethod::MonteCarlo, 200000, 6);
    EXPECT_NE(a.value, c.value);
}

TEST(PhaseVolume, NonEllipsoidalSymbolUsesDirectionalBox) {
    // ℓ^4 "norm", degree 1: volume of {|η|_4 < 1} in R^2 is 4Γ(5/4)²/Γ(3/2).
    const HomogeneousSymbol quartic(1.0, "l4", [](std::span<const double>, std::span<const double> e) {
        return std::pow(std::pow(e[0], 4) + std::pow(e[1], 4), 0.25);
    });
    const BoundaryMetric id = BoundaryMetric::identity(2);
    const std::vector<double> x{0.0, 0.0};
    const double exact = 4 * std::pow(std::tgamma(1.25), 2) / std::tgamma(1.5);
    const auto mc = hormander_phase_volume(quartic, id, x, VolumeMethod::MonteCarlo, 400000, 3);
    EXPECT_NEAR(mc.value, exact, 4 * mc.standard_error);
    EXPECT_THROW(hormander_phase_volume(quartic, id, x, VolumeMethod::Closed), std::invalid_argument);
}

TEST(PhaseVolume, RejectsBadInput) {
    const HomogeneousSymbol bumpy(1.0, "bumpy", [](std::span<const double>, std::span<const double> e) {
        return std::abs(e[0]) + e[0] * e[0];
    });
    const BoundaryMetric id = BoundaryMetric::identity(1);
    const std::vector<double> x{0.0};
    EXPECT_THROW(hormander_phase_volume(bumpy, id, x, VolumeMethod::MonteCarlo, 100), std::invalid_argument);
    auto metric = std::make_shared<const BoundaryMetric>(BoundaryMetric::identity(1));
    const auto f = make_symbol_F(metric);
    EXPECT_THROW(hormander_phase_volume(f, x, VolumeMethod::MonteCarlo, 0), std::invalid_argument);
    EXPECT_THROW(hormander_phase_volume(make_constant_symbol(2.0), id, x, VolumeMethod::Closed),
                 std::invalid_argument);
}

TEST(RemainderFit, DiskExactlyMinusOne) {
    const auto s = ball_spectrum_p1(2, 500);
    const auto model = WeylModel::make(ProblemKind::NeumannTrace, 2, 2 * kPi);
    const auto report = remainder_fit(CountingSeries::at_eigenvalues(s), model);
    EXPECT_EQ(report.second_coeff_estimate, -1.0);
    for (const auto& pt : report.residual_series) EXPECT_EQ(pt.residual, -1.0);
    EXPECT_TRUE(report.sharp_verdict);
    EXPECT_EQ(report.tolerance_used, 0.1 * model.c_lead);
}

TEST(RemainderFit, BallThreeDimensions) {
    const int m_max = 1999;  // λ̃_max = 4001
    const double lam_max = 3 + 2.0 * m_max;
    const auto model = WeylModel::make(ProblemKind::NeumannTrace, 3, 4 * kPi);
    const auto report = remainder_fit(CountingSeries::at_eigenvalues(ball_spectrum_p1(3, m_max)), model);
    EXPECT_NEAR(report.second_coeff_estimate, -0.5 + 1 / (4 * lam_max), 1e-9);
    EXPECT_TRUE(report.sharp_verdict);
    EXPECT_EQ(report.sharp_verdict, std::abs(report.second_coeff_estimate) > report.tolerance_used);
}

TEST(RemainderFit, DiskProblemTwoConstant) {
    const auto model = WeylModel::make(ProblemKind::DirichletTrace, 2, 2 * kPi);
    const auto report = remainder_fit(CountingSeries::at_eigenvalues(disk_spectrum_p2(10000)), model);
    EXPECT_NEAR(report.second_coeff_estimate, 1.0 / 3.0, 1e-3);
    EXPECT_TRUE(report.sharp_verdict);
}

TEST(RemainderFit, ConvergesToOneMinusNTimesLeading) {
    for (int n = 2; n <= 5; ++n) {
        const auto model = WeylModel::make(ProblemKind::NeumannTrace, n, n * oracle::ball_volume(n));
        const auto report = remainder_fit(CountingSeries::at_eigenvalues(ball_spectrum_p1(n, 400)), model);
        const double target = (1 - n) * model.c_lead;
        // |r(λ̃) - (1-n)C_lead| · λ̃ stays bounded.
        double bound = 0;
        for (const auto& pt : report.residual_series)
            if (pt.tau >= 50) bound = std::max(bound, std::abs(pt.residual - target) * pt.tau);
        const auto& last = report.residual_series.back();
        EXPECT_LT(std::abs(last.residual - target) * last.tau, bound + 1e-6) << n;
        EXPECT_LT(bound, 10.0 * n) << n;
        EXPECT_NEAR(report.second_coeff_estimate, target, bound / last.tau + 1e-9) << n;
    }
}

TEST(RemainderFit, LeadingOrderRelativeError) {
    for (int n = 2; n <= 5; ++n) {
        const auto s = ball_spectrum_p1(n, 300);
        const auto model = WeylModel::make(ProblemKind::NeumannTrace, n, n * oracle::ball_volume(n));
        for (const auto& e : s.entries) {
            const double ratio = count_upto(s, e.value).get_d() / model.predicted(e.value);
            EXPECT_LE(std::abs(ratio - 1.0), n / e.value) << n << " " << e.value;
        }
    }
}

TEST(RemainderFit, Rejections) {
    const auto model2 = WeylModel::make(ProblemKind::NeumannTrace, 2, 2 * kPi);
    EXPECT_THROW(remainder_fit(CountingSeries::at_eigenvalues(ball_spectrum_p1(2, 5)), model2),
                 std::invalid_argument);
    CountingSeries narrow;
    for (int k = 1; k <= 12; ++k) narrow.samples.push_back({10.0 + k * 0.1, k});
    EXPECT_THROW(remainder_fit(narrow, model2), std::invalid_argument);
    // Ball data in n = 4 (counts ~ τ³) against a two-dimensional model.
    EXPECT_THROW(remainder_fit(CountingSeries::at_eigenvalues(ball_spectrum_p1(4, 200)), model2),
                 std::invalid_argument);
    CountingSeries unordered{{{2.0, 1}, {1.0, 2}}};
    EXPECT_THROW(unordered.validate(), std::invalid_argument);
    CountingSeries decreasing{{{1.0, 2}, {2.0, 1}}};
    EXPECT_THROW(decreasing.validate(), std::invalid_argument);
}

TEST(GammaIdentity, SmallAndLargeN) {
    EXPECT_LT(gamma_identity_check(2), 1e-14);
    EXPECT_LT(gamma_identity_check(3), 1e-14);
    EXPECT_LT(gamma_identity_check(10), 1e-12);
    // Independent evaluation with the Gamma-function ball volumes.
    for (int n = 2; n <= 12; ++n) {
        const double lhs = 1.0 / (std::pow(2.0, n - 2) * oracle::fact(n - 1).get_d());
        const double rhs = oracle::ball_volume(n - 1) * n * oracle::ball_volume(n) / std::pow(4 * kPi, n - 1);
        EXPECT_NEAR(lhs, rhs, 1e-12 * lhs + 1e-15) << n;
    }
    EXPECT_THROW(gamma_identity_check(1), std::invalid_argument);
}
