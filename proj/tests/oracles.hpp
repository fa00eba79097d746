#pragma once

// Independent reference computations for the test suites. None of these call into
// the library code paths they are used to check.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// All exponent vectors of total degree m in n variables (any order).
inline std::vector<std::vector<int>> exponents(int n, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n - 1) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (int k = left; k >= 0; --k) {
            cur[i] = k;
            rec(i + 1, left - k);
        }
    };
    if (n > 0) rec(0, m);
    return out;
}

// Rank of a dense rational matrix by fraction-exact Gaussian elimination.
inline int rational_rank(std::vector<std::vector<mpq_class>> a) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == static_cast<std::size_t>(rank) || a[r][c] == 0) continue;
            const mpq_class f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

// dim ker(Δ : P_m → P_{m-2}) computed from the dense Laplacian matrix.
inline long laplacian_nullity(int n, int m) {
    const auto src = exponents(n, m);
    if (m < 2) return static_cast<long>(src.size());
    const auto dst = exponents(n, m - 2);
    std::map<std::vector<int>, std::size_t> row_of;
    for (std::size_t i = 0; i < dst.size(); ++i) row_of[dst[i]] = i;
    std::vector<std::vector<mpq_class>> mat(dst.size(), std::vector<mpq_class>(src.size(), 0));
    for (std::size_t j = 0; j < src.size(); ++j) {
        for (int i = 0; i < n; ++i) {
            if (src[j][i] < 2) continue;
            auto e = src[j];
            e[i] -= 2;
            mat[row_of.at(e)][j] += src[j][i] * (src[j][i] - 1);
        }
    }
    return static_cast<long>(src.size()) - rational_rank(std::move(mat));
}

// Binomial coefficient by the multiplicative formula.
inline mpz_class choose(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline mpz_class fact(long k) {
    mpz_class r = 1;
    for (long i = 2; i <= k; ++i) r *= i;
    return r;
}

// Volume of the unit ball in R^k from the Gamma function.
inline double ball_volume(int k) {
    return std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
}

// Eigenvalue list with repetitions, for counting by brute force.
inline std::vector<double> expand(const std::vector<std::pair<double, long>>& entries) {
    std::vector<double> out;
    for (const auto& [v, mult] : entries)
        for (long i = 0; i < mult; ++i) out.push_back(v);
    return out;
}

inline long count_le(const std::vector<double>& values, double tau) {
    long c = 0;
    for (double v : values)
        if (v <= tau) ++c;
    return c;
}

// Central finite differences on a scalar function.
inline double d1(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

inline double d2(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

// Fourth-order accurate 1D second derivative.
inline double d2_4(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
           (12 * h * h);
}

// 2D five-point Laplacian.
inline double lap5(const std::function<double(double, double)>& f, double x, double y, double h) {
    return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4 * f(x, y)) / (h * h);
}

// Plain Monte Carlo estimate of the measure of {η : p(η) < 1} inside [-R, R]^d.
inline std::pair<double, double> mc_volume(const std::function<double(const std::vector<double>&)>& p,
                                           int d, double R, std::size_t samples,
                                           std::uint64_t seed) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    std::uniform_real_distribution<double> u(-R, R);
    std::vector<double> eta(d);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (double& v : eta) v = u(rng);
        if (p(eta) < 1.0) ++hits;
    }
    const double box = std::pow(2 * R, d);
    const double f = static_cast<double>(hits) / samples;
    return {box * f, box * std::sqrt(f * (1 - f) / samples)};
}

}  // namespace oracle
