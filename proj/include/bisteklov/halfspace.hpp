#pragma once

// Constant-coefficient half-space model problems
//
//   (Σ a^{jk} ∂_j ∂_k + a^{nn} ∂_n²)² u = 0   in x_n > 0,
//
// with either (u = 0, √a^{nn} ∂_n u = h) or (u = φ, ∂_n u = 0) on x_n = 0.
// After a Fourier transform in x' each becomes a fourth-order ODE in x_n whose
// decaying solution is known in closed form. This header provides those closed
// forms, a finite-difference solver for the ODE that recovers the boundary
// symbols numerically, and the explicit Poisson-type kernels K1/K2.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisteklov/problem.hpp"

namespace bisteklov {

using Complex = std::complex<double>;

/// Block-diagonal coefficient matrix diag(a_tan, a_nn) of the model operator.
struct MetricBlock {
    Eigen::MatrixXd a_tan;  // (n-1)x(n-1), SPD
    double a_nn;            // > 0

    static MetricBlock identity(int n) {
        return {Eigen::MatrixXd::Identity(n - 1, n - 1), 1.0};
    }

    int dim() const { return static_cast<int>(a_tan.rows()) + 1; }

    void validate() const {
        if (a_tan.rows() < 1 || a_tan.rows() != a_tan.cols())
            throw std::invalid_argument("MetricBlock: a_tan must be square and nonempty");
        if (!a_tan.isApprox(a_tan.transpose(), 1e-13))
            throw std::invalid_argument("MetricBlock: a_tan must be symmetric");
        if (Eigen::LLT<Eigen::MatrixXd>(a_tan).info() != Eigen::Success)
            throw std::invalid_argument("MetricBlock: a_tan must be positive definite");
        if (!(a_nn > 0.0)) throw std::invalid_argument("MetricBlock: a_nn must be positive");
    }

    /// η'ᵀ a_tan η'.
    double tangential_form(std::span<const double> eta) const {
        if (static_cast<Eigen::Index>(eta.size()) != a_tan.rows())
            throw std::invalid_argument("MetricBlock: covector dimension mismatch");
        const Eigen::Map<const Eigen::VectorXd> v(eta.data(), a_tan.rows());
        return v.dot(a_tan * v);
    }
};

/// Seeded random block: a_tan = BᵀB + 0.5 I with B uniform in [-1, 1], a_nn uniform in [0.5, 2].
inline MetricBlock random_metric_block(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> normal_coeff(0.5, 2.0);
    Eigen::MatrixXd b(n - 1, n - 1);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = entry(rng);
    MetricBlock block{b.transpose() * b + 0.5 * Eigen::MatrixXd::Identity(n - 1, n - 1),
                      normal_coeff(rng)};
    return block;
}

/// Transformed boundary datum: frequency η' and amplitude (ĥ or φ̂).
struct FourierDatum {
    std::vector<double> eta;
    Complex amplitude{1.0, 0.0};
};

/// |ξ'| = √(η'ᵀ a_tan η' / a_nn), the decay rate of the transformed solution.
inline double xi_norm(const MetricBlock& a, std::span<const double> eta) {
    bool nonzero = false;
    for (double v : eta) nonzero = nonzero || v != 0.0;
    if (!nonzero) throw std::invalid_argument("xi_norm: covector must be nonzero");
    return std::sqrt(a.tangential_form(eta) / a.a_nn);
}

/// d^k/dx_n^k of û = (ĥ/√a_nn) x_n e^{-|ξ'|x_n}; satisfies û(0) = 0, √a_nn û'(0) = ĥ.
inline Complex fourier_solution_p1(const MetricBlock& a, const FourierDatum& datum, double x_n,
                                   int derivative = 0) {
    if (x_n < 0.0) throw std::invalid_argument("fourier_solution_p1: x_n must be >= 0");
    const double k = xi_norm(a, datum.eta);
    const double e = std::exp(-k * x_n);
    // d^j [x e^{-kx}] = ((-k)^j x + j (-k)^{j-1}) e^{-kx}
    const double pj = std::pow(-k, derivative);
    const double pj1 = derivative > 0 ? derivative * std::pow(-k, derivative - 1) : 0.0;
    return datum.amplitude / std::sqrt(a.a_nn) * ((pj * x_n + pj1) * e);
}

/// d^k/dx_n^k of û = φ̂ e^{-|ξ'|x_n}(1 + |ξ'|x_n); satisfies û(0) = φ̂, û'(0) = 0.
inline Complex fourier_solution_p2(const MetricBlock& a, const FourierDatum& datum, double x_n,
                                   int derivative = 0) {
    if (x_n < 0.0) throw std::invalid_argument("fourier_solution_p2: x_n must be >= 0");
    const double k = xi_norm(a, datum.eta);
    const double e = std::exp(-k * x_n);
    const double pj = std::pow(-k, derivative);
    const double pj1 = derivative > 0 ? derivative * std::pow(-k, derivative - 1) : 0.0;
    return datum.amplitude * ((pj + k * (pj * x_n + pj1)) * e);
}

/// Principal symbol targets: 2(η'ᵀa_tan η')^{1/2} and 2(η'ᵀa_tan η')^{3/2}.
inline double halfspace_target_p1(const MetricBlock& a, std::span<const double> eta) {
    return 2.0 * std::sqrt(a.tangential_form(eta));
}

inline double halfspace_target_p2(const MetricBlock& a, std::span<const double> eta) {
    const double q = a.tangential_form(eta);
    return 2.0 * q * std::sqrt(q);
}

/// Uniform grid {0, h, ..., L} on the truncated normal half-line.
struct HalfSpaceGrid {
    double h;
    double L;

    int intervals() const {
        if (!(h > 0.0) || !(L > 0.0)) throw std::invalid_argument("HalfSpaceGrid: need h, L > 0");
        const double ratio = L / h;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 * ratio)
            throw std::invalid_argument("HalfSpaceGrid: L/h must be an integer");
        if (rounded < 8) throw std::invalid_argument("HalfSpaceGrid: need at least 8 intervals");
        return static_cast<int>(rounded);
    }
};

/// Minimum decay length L·|ξ'| accepted by the finite-difference solvers.
inline constexpr double kMinDecayLengths = 20.0;

struct BvpResult {
    double recovered;              // numerically recovered symbol value
    std::vector<Complex> profile;  // û at the grid nodes, scaled by the datum amplitude
};

namespace detail {

enum class HalfSpaceBc { NeumannData, DirichletData };

// Solves û'''' - 2k²û'' + k⁴û = 0 on [0, L] with second-order central differences,
// two one-sided second-order boundary rows at each end and unit data. Returns
// the nodal values. The system's condition number grows like (L/h)^4, so it is
// factored in extended precision.
inline Eigen::VectorXd solve_model_ode(double k, const HalfSpaceGrid& grid, HalfSpaceBc bc,
                                       double neumann_scale) {
    const int n = grid.intervals();
    const double h = grid.h;
    if (grid.L * k < kMinDecayLengths)
        throw std::invalid_argument("halfspace solver: L|xi'| = " + std::to_string(grid.L * k) +
                                    " is below the decay adequacy threshold " +
                                    std::to_string(kMinDecayLengths));

    using Real = long double;
    std::vector<Eigen::Triplet<Real>> entries;
    entries.reserve(static_cast<std::size_t>(5) * (n + 1));
    Eigen::Matrix<Real, Eigen::Dynamic, 1> rhs = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(n + 1);

    // Row 0: value at x_n = 0; row 1: first derivative at x_n = 0 (scaled by 2h).
    entries.emplace_back(0, 0, 1.0);
    entries.emplace_back(1, 0, -3.0);
    entries.emplace_back(1, 1, 4.0);
    entries.emplace_back(1, 2, -1.0);
    if (bc == HalfSpaceBc::NeumannData) {
        rhs(1) = 2.0L * h / neumann_scale;  // √a_nn û'(0) = 1
    } else {
        rhs(0) = 1.0;  // û(0) = 1, û'(0) = 0
    }

    // Interior rows, multiplied through by h⁴.
    const Real kh2 = static_cast<Real>(k) * k * h * h;
    const Real c2 = -4.0L - 2.0L * kh2;
    const Real c0 = 6.0L + 4.0L * kh2 + kh2 * kh2;
    for (int i = 2; i <= n - 2; ++i) {
        entries.emplace_back(i, i - 2, 1.0);
        entries.emplace_back(i, i - 1, c2);
        entries.emplace_back(i, i, c0);
        entries.emplace_back(i, i + 1, c2);
        entries.emplace_back(i, i + 2, 1.0);
    }

    // Far field: û'(L) = 0, û(L) = 0.
    entries.emplace_back(n - 1, n, 3.0);
    entries.emplace_back(n - 1, n - 1, -4.0);
    entries.emplace_back(n - 1, n - 2, 1.0);
    entries.emplace_back(n, n, 1.0);

    Eigen::SparseMatrix<Real> matrix(n + 1, n + 1);
    matrix.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;
    lu.compute(matrix);
    if (lu.info() != Eigen::Success) throw SolverError("halfspace solver: factorization failed");
    const Eigen::Matrix<Real, Eigen::Dynamic, 1> sol = lu.solve(rhs);
    const Eigen::VectorXd u = sol.cast<double>();
    if (lu.info() != Eigen::Success || !u.allFinite())
        throw SolverError("halfspace solver: solve failed");
    return u;
}

inline std::vector<Complex> scaled_profile(const Eigen::VectorXd& u, Complex amplitude) {
    std::vector<Complex> out(static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = amplitude * u(i);
    return out;
}

}  // namespace detail

/// Finite-difference recovery of the Neumann-to-Laplacian symbol:
/// returns -(a_nn û''(0) - a_nn|ξ'|² û(0)) / ĥ, which tends to 2(η'ᵀa_tan η')^{1/2} at O(h²).
inline BvpResult bvp_solve_p1(const MetricBlock& a, const FourierDatum& datum,
                              const HalfSpaceGrid& grid) {
    a.validate();
    if (datum.amplitude == Complex{}) throw std::invalid_argument("bvp_solve_p1: zero amplitude");
    const double k = xi_norm(a, datum.eta);
    const Eigen::VectorXd u =
        detail::solve_model_ode(k, grid, detail::HalfSpaceBc::NeumannData, std::sqrt(a.a_nn));
    const double h = grid.h;
    const double u_xx = (2.0 * u(0) - 5.0 * u(1) + 4.0 * u(2) - u(3)) / (h * h);
    const double recovered = -(a.a_nn * u_xx - a.a_nn * k * k * u(0));
    return {recovered, detail::scaled_profile(u, datum.amplitude)};
}

/// Finite-difference recovery of the Dirichlet-to-Laplacian-derivative symbol:
/// returns √a_nn (a_nn û'''(0) - a_nn|ξ'|² û'(0)) / φ̂, which tends to
/// 2(η'ᵀa_tan η')^{3/2}. The five-point one-sided third derivative is second order but
/// divides by h³, so rounding takes over below h ≈ 1/1000.
inline BvpResult bvp_solve_p2(const MetricBlock& a, const FourierDatum& datum,
                              const HalfSpaceGrid& grid) {
    a.validate();
    if (datum.amplitude == Complex{}) throw std::invalid_argument("bvp_solve_p2: zero amplitude");
    const double k = xi_norm(a, datum.eta);
    const Eigen::VectorXd u =
        detail::solve_model_ode(k, grid, detail::HalfSpaceBc::DirichletData, 1.0);
    const double h = grid.h;
    const double u_x = (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h);
    const double u_xxx =
        (-5.0 * u(0) + 18.0 * u(1) - 24.0 * u(2) + 14.0 * u(3) - 3.0 * u(4)) / (2.0 * h * h * h);
    const double recovered = std::sqrt(a.a_nn) * (a.a_nn * u_xxx - a.a_nn * k * k * u_x);
    return {recovered, detail::scaled_profile(u, datum.amplitude)};
}

// ---------------------------------------------------------------------------
// Kernels

enum class KernelKind { K1, K2 };

struct KernelValue {
    double value;      // real part of the sphere integral
    double imaginary;  // must vanish up to rounding
};

/// Default node count for the circle quadrature used when n = 3.
inline constexpr int kDefaultCircleNodes = 256;

/// Relative size of the imaginary part above which kernel_K reports a SolverError.
inline constexpr double kKernelImaginaryTolerance = 1e-10;

/// K1 or K2 at (x', x_n) for n = 2 or 3:
///   K1 = c_n ∮ [z^{1-n} + (n-1) i x_n s z^{-n}] ds_η,   K2 = c_n ∮ (x_n/√a_nn) z^{1-n} ds_η,
/// with s = √(η'ᵀa_tan η'/a_nn), z = x'·η' + i x_n s, c_n = (-1)^{n-1}(n-2)!/(2πi)^{n-1},
/// over the unit sphere |η'| = 1. For n = 2 the sphere is {-1, +1}; for n = 3 the circle
/// is integrated with the periodic trapezoid rule on `quad_points` nodes.
inline KernelValue kernel_K(const MetricBlock& a, KernelKind which, std::span<const double> x,
                            double x_n, int quad_points = kDefaultCircleNodes) {
    const int n = a.dim();
    if (n != 2 && n != 3) throw std::invalid_argument("kernel_K: only n = 2 and n = 3 are supported");
    if (static_cast<int>(x.size()) != n - 1)
        throw std::invalid_argument("kernel_K: x' has the wrong dimension");
    if (!(x_n > 0.0)) throw std::invalid_argument("kernel_K: x_n must be positive");
    if (n == 3 && quad_points < 4) throw std::invalid_argument("kernel_K: need quad_points >= 4");

    const Complex I{0.0, 1.0};
    const double sqrt_ann = std::sqrt(a.a_nn);
    auto integrand = [&](std::span<const double> eta) {
        const double s = std::sqrt(a.tangential_form(eta) / a.a_nn);
        double dot = 0.0;
        for (int j = 0; j < n - 1; ++j) dot += x[j] * eta[j];
        const Complex z = dot + I * (x_n * s);
        if (which == KernelKind::K2) return (x_n / sqrt_ann) * std::pow(z, 1 - n);
        return std::pow(z, 1 - n) + static_cast<double>(n - 1) * I * (x_n * s) * std::pow(z, -n);
    };

    Complex sum{};
    if (n == 2) {
        const double plus[1] = {1.0};
        const double minus[1] = {-1.0};
        sum = integrand(plus) + integrand(minus);
    } else {
        const double dtheta = 2.0 * std::numbers::pi / quad_points;
        for (int j = 0; j < quad_points; ++j) {
            const double eta[2] = {std::cos(j * dtheta), std::sin(j * dtheta)};
            sum += integrand(eta);
        }
        sum *= dtheta;
    }
    // (-1)^{n-1} (n-2)! / (2πi)^{n-1}
    const Complex prefactor =
        (n == 2 ? -1.0 : 1.0) * std::tgamma(static_cast<double>(n - 1)) /
        std::pow(2.0 * std::numbers::pi * I, n - 1);
    const Complex value = prefactor * sum;
    if (std::abs(value.imag()) > kKernelImaginaryTolerance * std::max(1.0, std::abs(value.real())))
        throw SolverError("kernel_K: imaginary part " + std::to_string(value.imag()) +
                          " does not vanish");
    return {value.real(), value.imag()};
}

/// Boundary data φ and h sampled on a uniform grid in R^{n-1}, n ∈ {2, 3}.
/// Samples are stored with the last coordinate varying fastest.
struct BoundaryData {
    std::vector<double> origin;
    double spacing;
    std::vector<int> counts;
    std::vector<double> phi;
    std::vector<double> h;

    int boundary_dim() const { return static_cast<int>(counts.size()); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int c : counts) s *= static_cast<std::size_t>(c);
        return s;
    }

    std::vector<double> node(std::size_t flat) const {
        std::vector<double> y(counts.size());
        for (int d = boundary_dim() - 1; d >= 0; --d) {
            y[d] = origin[d] + spacing * static_cast<double>(flat % counts[d]);
            flat /= counts[d];
        }
        return y;
    }

    bool on_edge(std::size_t flat) const {
        for (int d = boundary_dim() - 1; d >= 0; --d) {
            const auto i = flat % counts[d];
            if (i == 0 || i + 1 == static_cast<std::size_t>(counts[d])) return true;
            flat /= counts[d];
        }
        return false;
    }

    /// Samples f on an n-1 dimensional grid with `points` nodes per direction.
    template <class F>
    static std::vector<double> sample(const std::vector<double>& origin, double spacing,
                                      const std::vector<int>& counts, F&& f) {
        BoundaryData shape{origin, spacing, counts, {}, {}};
        std::vector<double> out(shape.size());
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(shape.node(j));
        return out;
    }

    void validate() const {
        if (counts.empty() || counts.size() != origin.size())
            throw std::invalid_argument("BoundaryData: inconsistent grid description");
        if (!(spacing > 0.0)) throw std::invalid_argument("BoundaryData: spacing must be positive");
        if (phi.size() != size() || h.size() != size())
            throw std::invalid_argument("BoundaryData: sample count does not match grid");
        for (std::size_t j = 0; j < size(); ++j)
            if (on_edge(j) && (std::abs(phi[j]) > 1e-12 || std::abs(h[j]) > 1e-12))
                throw std::invalid_argument(
                    "BoundaryData: support violation, data nonzero at the window edge");
    }
};

/// Smallest x_n at which the kernels are evaluated.
inline constexpr double kKernelMinHeight = 1e-3;

/// u(x', x_n) = Σ_j [K1(x' - y_j, x_n) φ_j + K2(x' - y_j, x_n) h_j] Δy^{n-1}.
inline std::vector<double> solve_by_kernel(const MetricBlock& a, const BoundaryData& data,
                                           const std::vector<std::vector<double>>& points,
                                           int quad_points = kDefaultCircleNodes) {
    a.validate();
    data.validate();
    const int n = a.dim();
    if (data.boundary_dim() != n - 1)
        throw std::invalid_argument("solve_by_kernel: data dimension does not match the block");
    const double cell = std::pow(data.spacing, n - 1);

    std::vector<std::vector<double>> nodes(data.size());
    for (std::size_t j = 0; j < data.size(); ++j) nodes[j] = data.node(j);

    std::vector<double> out;
    out.reserve(points.size());
    std::vector<double> diff(n - 1);
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != n)
            throw std::invalid_argument("solve_by_kernel: evaluation point has wrong dimension");
        const double x_n = p[n - 1];
        if (x_n < kKernelMinHeight)
            throw std::invalid_argument("solve_by_kernel: evaluation point too close to boundary");
        double u = 0.0;
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (data.phi[j] == 0.0 && data.h[j] == 0.0) continue;
            for (int d = 0; d < n - 1; ++d) diff[d] = p[d] - nodes[j][d];
            if (data.phi[j] != 0.0)
                u += kernel_K(a, KernelKind::K1, diff, x_n, quad_points).value * data.phi[j];
            if (data.h[j] != 0.0)
                u += kernel_K(a, KernelKind::K2, diff, x_n, quad_points).value * data.h[j];
        }
        out.push_back(u * cell);
    }
    return out;
}

/// Fourier-side solution for n = 2: transforms the sampled data with the
/// trapezoid sum ĝ(η) = Σ g_j e^{-iηy_j} Δy, multiplies by the closed-form
/// transformed solutions and inverts by composite Gauss–Legendre quadrature on
/// |η| <= π/Δy.
inline std::vector<double> fourier_synthesis(const MetricBlock& a, const BoundaryData& data,
                                             const std::vector<std::vector<double>>& points,
                                             int panels = 64) {
    a.validate();
    data.validate();
    if (a.dim() != 2) throw std::invalid_argument("fourier_synthesis: only n = 2 is supported");
    using Rule = boost::math::quadrature::gauss<double, 10>;
    const double cutoff = std::numbers::pi / data.spacing;

    // Frequency nodes on [0, cutoff]; the negative half is mirrored.
    std::vector<double> freq, weight;
    const double width = cutoff / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (std::size_t k = 0; k < Rule::abscissa().size(); ++k) {
            for (double sign : {1.0, -1.0}) {
                freq.push_back(mid + sign * 0.5 * width * Rule::abscissa()[k]);
                weight.push_back(0.5 * width * Rule::weights()[k]);
            }
        }
    }

    const Complex I{0.0, 1.0};
    std::vector<Complex> phi_hat(freq.size() * 2), h_hat(freq.size() * 2);
    std::vector<double> all_freq(freq.size() * 2);
    for (std::size_t q = 0; q < freq.size(); ++q) {
        all_freq[2 * q] = freq[q];
        all_freq[2 * q + 1] = -freq[q];
    }
    for (std::size_t q = 0; q < all_freq.size(); ++q) {
        Complex fp{}, fh{};
        for (std::size_t j = 0; j < data.size(); ++j) {
            const double y = data.origin[0] + data.spacing * static_cast<double>(j);
            const Complex phase = std::exp(-I * (all_freq[q] * y));
            fp += data.phi[j] * phase;
            fh += data.h[j] * phase;
        }
        phi_hat[q] = fp * data.spacing;
        h_hat[q] = fh * data.spacing;
    }

    const double s = std::sqrt(a.a_tan(0, 0) / a.a_nn);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != 2) throw std::invalid_argument("fourier_synthesis: points must be (x', x_n)");
        const double x = p[0];
        const double x_n = p[1];
        if (x_n < 0.0) throw std::invalid_argument("fourier_synthesis: x_n must be >= 0");
        Complex u{};
        for (std::size_t q = 0; q < all_freq.size(); ++q) {
            const double eta = all_freq[q];
            const double k = s * std::abs(eta);
            const double decay = std::exp(-k * x_n);
            const Complex transformed =
                phi_hat[q] * (decay * (1.0 + k * x_n)) + h_hat[q] * (x_n * decay / std::sqrt(a.a_nn));
            u += weight[q / 2] * transformed * std::exp(I * (eta * x));
        }
        out.push_back(u.real() / (2.0 * std::numbers::pi));
    }
    return out;
}

}  // namespace bisteklov
