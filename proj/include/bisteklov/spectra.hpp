#pragma once

// Closed-form Steklov spectra on the unit ball and disk with unit weight,
// plus exact verification of the eigenpairs behind them.

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisteklov/polynomial.hpp"
#include "bisteklov/problem.hpp"

namespace bisteklov {

inline mpz_class binomial(long top, long bottom) {
    if (top < 0 || bottom < 0 || bottom > top) return 0;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(top),
                 static_cast<unsigned long>(bottom));
    return out;
}

inline mpz_class factorial(long k) {
    if (k < 0) throw std::invalid_argument("factorial: negative argument");
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(k));
    return out;
}

/// Dimension N(n, m) of the space of degree-m solid spherical harmonics in n variables.
inline mpz_class harmonic_dim(int n, int m) {
    if (n < 1 || m < 0) throw std::invalid_argument("harmonic_dim: need n >= 1 and m >= 0");
    if (n == 1) return m <= 1 ? 1 : 0;
    if (n == 2) return m == 0 ? 1 : 2;
    // (2m+n-2)/(n-2) * C(m+n-3, n-3); the division is exact.
    mpz_class numer = mpz_class(2 * m + n - 2) * binomial(m + n - 3, n - 3);
    return numer / (n - 2);
}

/// dim P_m(R^n) = C(m+n-1, n-1).
inline mpz_class monomial_count(int n, int m) { return binomial(m + n - 1, n - 1); }

inline constexpr std::size_t kDefaultMonomialCap = 200000;

/// Basis of the degree-m solid spherical harmonics in n variables.
///
/// The Laplacian P_m -> P_{m-2} maps the coefficient of x' ^ α x_n^k (k >= 2)
/// onto the equation for x'^α x_n^(k-2) with pivot k(k-1), so its matrix is
/// triangular in the x_n-degree. The free columns are the monomials with
/// x_n-degree 0 or 1; back substitution
///     u_{k+2} = -Δ' u_k / ((k+1)(k+2)),   u = Σ_k x_n^k u_k(x'),
/// gives the nullspace vector attached to each free column. Throws ResourceError
/// when dim P_m exceeds `monomial_cap`.
inline std::vector<HarmonicPoly> harmonic_basis(int n, int m,
                                                std::size_t monomial_cap = kDefaultMonomialCap) {
    if (n < 2 || m < 0) throw std::invalid_argument("harmonic_basis: need n >= 2 and m >= 0");
    if (monomial_count(n, m) > mpz_class(static_cast<unsigned long>(monomial_cap)))
        throw ResourceError("harmonic_basis: monomial basis of P_" + std::to_string(m) +
                            "(R^" + std::to_string(n) + ") exceeds cap " +
                            std::to_string(monomial_cap));

    const int tangential = n - 1;
    auto lift = [&](const Polynomial& slice) {  // embed a polynomial in x' into n variables
        Polynomial out(n);
        for (const auto& [alpha, c] : slice.terms()) {
            Exponent e(alpha);
            e.push_back(0);
            out.add_term(e, c);
        }
        return out;
    };
    auto extend = [&](Polynomial u0, Polynomial u1) {
        std::vector<Polynomial> slices;
        slices.push_back(std::move(u0));
        slices.push_back(std::move(u1));
        for (int k = 0; k + 2 <= m; ++k) {
            Polynomial next = slices[k].laplacian();
            next *= mpq_class(-1, (k + 1) * (k + 2));
            slices.push_back(std::move(next));
        }
        Polynomial u(n);
        for (std::size_t k = 0; k < slices.size(); ++k) {
            const Polynomial lifted = lift(slices[k]);
            for (const auto& [alpha, c] : lifted.terms()) {
                Exponent e = alpha;
                e[n - 1] = static_cast<std::uint16_t>(k);
                u.add_term(e, c);
            }
        }
        return u;
    };

    std::vector<HarmonicPoly> basis;
    for (const auto& alpha : monomials_of_degree(tangential, m))
        basis.push_back(extend(Polynomial::monomial(alpha), Polynomial(tangential)));
    if (m >= 1)
        for (const auto& beta : monomials_of_degree(tangential, m - 1))
            basis.push_back(extend(Polynomial(tangential), Polynomial::monomial(beta)));
    return basis;
}

struct SpectrumEntry {
    double value;             // eigenvalue
    mpz_class multiplicity;   // >= 1
    mpz_class exact_power;    // value^power as an exact integer (power from the Spectrum)
};

/// Sorted distinct eigenvalues of one problem with multiplicities.
struct Spectrum {
    ProblemKind problem;
    int n;
    int power;  // exact_power = value^power; 3 for DirichletTrace, 1 otherwise
    std::vector<SpectrumEntry> entries;

    /// Throws std::logic_error if the ordering or positivity invariants fail.
    void validate() const {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (e.multiplicity < 1) throw std::logic_error("Spectrum: multiplicity < 1");
            if (e.exact_power < 0 || e.value < 0.0)
                throw std::logic_error("Spectrum: negative eigenvalue");
            if (problem == ProblemKind::NeumannTrace && e.exact_power == 0)
                throw std::logic_error("Spectrum: NeumannTrace eigenvalues must be positive");
            if (i > 0 && !(entries[i - 1].exact_power < e.exact_power))
                throw std::logic_error("Spectrum: entries not strictly increasing");
        }
    }
};

/// Problem (Δ²u = 0, u = 0, Δu + λ ∂u/∂ν = 0) on the unit ball: λ = n + 2m with multiplicity N(n, m).
inline Spectrum ball_spectrum_p1(int n, int m_max) {
    if (n < 2 || m_max < 0) throw std::invalid_argument("ball_spectrum_p1: need n >= 2, m_max >= 0");
    Spectrum s{ProblemKind::NeumannTrace, n, 1, {}};
    s.entries.reserve(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        const long value = n + 2L * m;
        s.entries.push_back({static_cast<double>(value), harmonic_dim(n, m), mpz_class(value)});
    }
    return s;
}

/// Problem (Δ²u = 0, ∂u/∂ν = 0, ∂(Δu)/∂ν = μ³u) on the unit disk: μ³ = 2m²(m+1), double for m >= 1.
inline Spectrum disk_spectrum_p2(int m_max) {
    if (m_max < 0) throw std::invalid_argument("disk_spectrum_p2: need m_max >= 0");
    Spectrum s{ProblemKind::DirichletTrace, 2, 3, {}};
    s.entries.push_back({0.0, 1, 0});
    for (int m = 1; m <= m_max; ++m) {
        mpz_class cube = mpz_class(2) * m * m * (m + 1);
        s.entries.push_back({std::cbrt(cube.get_d()), 2, cube});
    }
    return s;
}

/// Harmonic Steklov problem on the unit disk: η = m, double for m >= 1.
inline Spectrum disk_spectrum_harmonic(int m_max) {
    if (m_max < 0) throw std::invalid_argument("disk_spectrum_harmonic: need m_max >= 0");
    Spectrum s{ProblemKind::HarmonicSteklov, 2, 1, {}};
    s.entries.push_back({0.0, 1, 0});
    for (int m = 1; m <= m_max; ++m) s.entries.push_back({static_cast<double>(m), 2, m});
    return s;
}

struct EigenpairCheck {
    bool biharmonic;        // Δ²φ ≡ 0
    bool vanishes_on_sphere;  // φ ∈ (|x|² - 1)
    bool boundary_condition;  // Δφ + λ ∂φ/∂ν ∈ (|x|² - 1), ν inward

    bool all() const { return biharmonic && vanishes_on_sphere && boundary_condition; }
};

/// Checks that φ = (1 - |x|²)ψ is an eigenfunction of the NeumannTrace problem on
/// the unit ball with eigenvalue n + 2m. Exact rational arithmetic throughout.
inline EigenpairCheck verify_ball_eigenpair(int n, int m, const HarmonicPoly& psi) {
    if (psi.nvars() != n) throw std::invalid_argument("verify_ball_eigenpair: wrong variable count");
    if (!psi.is_homogeneous(m))
        throw std::invalid_argument("verify_ball_eigenpair: psi is not homogeneous of degree m");
    if (!is_harmonic(psi)) throw std::invalid_argument("verify_ball_eigenpair: psi is not harmonic");

    const Polynomial phi = (Polynomial::constant(n, 1) - Polynomial::norm_squared(n)) * psi;
    const Polynomial lap = phi.laplacian();
    const mpq_class lambda = n + 2 * m;

    EigenpairCheck out{};
    out.biharmonic = lap.laplacian().is_zero();
    out.vanishes_on_sphere = phi.reduce_mod_unit_sphere().is_zero();
    // ∂φ/∂ν = -Σ x_i ∂_i φ on the sphere, so Δφ + λ ∂φ/∂ν = Δφ - λ Σ x_i ∂_i φ.
    out.boundary_condition = (lap - lambda * phi.euler()).reduce_mod_unit_sphere().is_zero();
    return out;
}

struct RadialCheck {
    mpq_class boundary_value;  // u(1)
    mpq_class mu_cubed;        // ∂(Δu)/∂ν / u on the boundary
    mpq_class residual;        // sum of absolute defects, exactly 0 for a valid eigenpair
};

/// Radial reduction of the disk DirichletTrace eigenproblem for angular mode m >= 1.
///
/// Writes u = f(r) cos mθ with Δu = ψ = r^m cos mθ and ∂u/∂ν = 0 at r = 1, solves
/// for f exactly, and forms the eigen-ratio μ³ = ∂(Δu)/∂ν / u at r = 1 with the
/// inward normal (∂/∂ν = -∂/∂r).
inline RadialCheck radial_verify_p2(int m) {
    if (m < 1) throw std::invalid_argument("radial_verify_p2: need m >= 1");
    // Radial operator L_m r^k = (k² - m²) r^(k-2). Particular part a r^(m+2), homogeneous b r^m.
    const mpq_class a = mpq_class(1) / mpq_class((m + 2) * (m + 2) - m * m);
    const mpq_class b = -a * (m + 2) / m;  // from f'(1) = (m+2)a + m b = 0

    std::map<int, mpq_class> f{{m + 2, a}, {m, b}};
    auto eval_at_one = [](const std::map<int, mpq_class>& poly) {
        mpq_class s = 0;
        for (const auto& [k, c] : poly) s += c;
        return s;
    };
    std::map<int, mpq_class> df;
    for (const auto& [k, c] : f)
        if (k != 0) df[k - 1] += c * k;
    std::map<int, mpq_class> lf;
    for (const auto& [k, c] : f) {
        mpq_class coeff = c * (k * k - m * m);
        if (coeff != 0) lf[k - 2] += coeff;
    }
    lf[m] -= 1;  // L_m f - r^m

    RadialCheck out;
    out.boundary_value = eval_at_one(f);
    const mpq_class normal_derivative_of_laplacian = -m;  // -∂_r r^m at r = 1
    out.mu_cubed = normal_derivative_of_laplacian / out.boundary_value;

    mpq_class residual = 0;
    for (const auto& [k, c] : lf) residual += abs(c);
    residual += abs(eval_at_one(df));
    residual += abs(out.boundary_value + mpq_class(1) / (mpz_class(2) * m * (m + 1)));
    residual += abs(out.mu_cubed - mpq_class(mpz_class(2) * m * m * (m + 1)));
    residual += abs(out.mu_cubed * out.boundary_value - normal_derivative_of_laplacian);
    out.residual = residual;
    return out;
}

}  // namespace bisteklov
