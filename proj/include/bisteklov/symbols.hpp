#pragma once

// Principal symbols of the boundary operators and the composition rule
// (the principal symbol of A∘B is the pointwise product a0·b0).

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bisteklov/boundary_weight.hpp"
#include "bisteklov/problem.hpp"

namespace bisteklov {

/// Inverse boundary metric g^{jk}(x'), symmetric positive definite.
class BoundaryMetric {
public:
    using Field = std::function<Eigen::MatrixXd(std::span<const double>)>;

    static BoundaryMetric identity(int dim) {
        return constant(Eigen::MatrixXd::Identity(dim, dim));
    }

    static BoundaryMetric constant(Eigen::MatrixXd g_inv) {
        check_spd(g_inv);
        BoundaryMetric m;
        m.dim_ = static_cast<int>(g_inv.rows());
        m.constant_ = std::move(g_inv);
        return m;
    }

    static BoundaryMetric field(int dim, Field g_inv) {
        BoundaryMetric m;
        m.dim_ = dim;
        m.field_ = std::move(g_inv);
        return m;
    }

    int dim() const { return dim_; }
    bool is_constant() const { return constant_.has_value(); }

    /// g^{jk}(x'); field metrics are checked for symmetry and definiteness here.
    Eigen::MatrixXd g_inv(std::span<const double> x) const {
        if (constant_) return *constant_;
        Eigen::MatrixXd g = field_(x);
        if (g.rows() != dim_ || g.cols() != dim_)
            throw std::logic_error("BoundaryMetric: field returned wrong shape");
        check_spd(g);
        return g;
    }

    /// Σ g^{jk}(x') η_j η_k.
    double quadratic_form(std::span<const double> x, std::span<const double> eta) const {
        if (static_cast<int>(eta.size()) != dim_)
            throw std::invalid_argument("BoundaryMetric: covector dimension mismatch");
        const Eigen::Map<const Eigen::VectorXd> v(eta.data(), dim_);
        if (constant_) return v.dot(*constant_ * v);
        return v.dot(field_(x) * v);
    }

private:
    BoundaryMetric() = default;

    static void check_spd(const Eigen::MatrixXd& g) {
        if (g.rows() != g.cols() || g.rows() < 1)
            throw std::invalid_argument("BoundaryMetric: matrix must be square and nonempty");
        if (!g.isApprox(g.transpose(), 1e-13))
            throw std::invalid_argument("BoundaryMetric: matrix must be symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(g);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("BoundaryMetric: matrix must be positive definite");
    }

    int dim_ = 0;
    std::optional<Eigen::MatrixXd> constant_;
    Field field_;
};

namespace detail {
inline void require_nonzero(std::span<const double> eta, const char* who) {
    for (double v : eta)
        if (v != 0.0) return;
    throw std::invalid_argument(std::string(who) + ": covector must be nonzero");
}
}  // namespace detail

/// 2 (Σ g^{jk} η_j η_k)^{1/2}: the Neumann-to-Laplacian map, degree 1.
inline double symbol_F(const BoundaryMetric& metric, std::span<const double> x,
                       std::span<const double> eta) {
    detail::require_nonzero(eta, "symbol_F");
    return 2.0 * std::sqrt(metric.quadratic_form(x, eta));
}

/// 2 (Σ g^{jk} η_j η_k)^{3/2}: the Dirichlet-to-Laplacian-derivative map, degree 3.
inline double symbol_Theta(const BoundaryMetric& metric, std::span<const double> x,
                           std::span<const double> eta) {
    detail::require_nonzero(eta, "symbol_Theta");
    const double q = metric.quadratic_form(x, eta);
    return 2.0 * q * std::sqrt(q);
}

/// Principal symbol of the operator whose eigenvalues are the Steklov eigenvalues
/// (cubed for DirichletTrace) with density ρ.
inline double symbol_steklov(ProblemKind problem, const BoundaryMetric& metric,
                             const BoundaryWeight& weight, std::span<const double> x,
                             std::span<const double> eta) {
    const double d = weight.regularized(x);
    if (d == 0.0) throw std::domain_error("symbol_steklov: rho + epsilon vanishes");
    switch (problem) {
        case ProblemKind::NeumannTrace: return symbol_F(metric, x, eta) / d;
        case ProblemKind::DirichletTrace: return symbol_Theta(metric, x, eta) / (d * d * d);
        case ProblemKind::HarmonicSteklov:
            detail::require_nonzero(eta, "symbol_steklov");
            return std::sqrt(metric.quadratic_form(x, eta)) / d;
    }
    throw std::logic_error("symbol_steklov: unknown problem kind");
}

/// A positively homogeneous function on the cotangent fiber.
///
/// Values are held as numerator(x', η') / denominator(x'); the denominator is
/// absent for most symbols. Keeping the quotient explicit lets composition with a
/// reciprocal multiplier such as 1/(ρ + ε) evaluate as an actual division.
///
/// `ellipsoid`, when present, records that the symbol equals
/// coefficient(x') · (Σ g^{jk} η_j η_k)^{degree/2} for the attached metric; a
/// null metric marks a degree-0 multiplier that is ellipsoidal for every metric.
class HomogeneousSymbol {
public:
    using Numerator = std::function<double(std::span<const double>, std::span<const double>)>;
    using Denominator = std::function<double(std::span<const double>)>;

    struct Ellipsoid {
        std::function<double(std::span<const double>)> coefficient;
        std::shared_ptr<const BoundaryMetric> metric;
    };

    HomogeneousSymbol(double degree, std::string label, Numerator numerator,
                      Denominator denominator = {}, std::optional<Ellipsoid> ellipsoid = {})
        : degree_(degree),
          label_(std::move(label)),
          numerator_(std::move(numerator)),
          denominator_(std::move(denominator)),
          ellipsoid_(std::move(ellipsoid)) {}

    double degree() const { return degree_; }
    const std::string& label() const { return label_; }
    const std::optional<Ellipsoid>& ellipsoid() const { return ellipsoid_; }
    bool has_denominator() const { return static_cast<bool>(denominator_); }

    double eval(std::span<const double> x, std::span<const double> eta) const {
        detail::require_nonzero(eta, label_.c_str());
        const double num = numerator_(x, eta);
        if (!denominator_) return num;
        const double den = denominator_(x);
        if (den == 0.0) throw std::domain_error(label_ + ": zero denominator");
        return num / den;
    }

    double numerator(std::span<const double> x, std::span<const double> eta) const {
        return numerator_(x, eta);
    }

    double denominator(std::span<const double> x) const {
        return denominator_ ? denominator_(x) : 1.0;
    }

private:
    double degree_;
    std::string label_;
    Numerator numerator_;
    Denominator denominator_;
    std::optional<Ellipsoid> ellipsoid_;
};

inline HomogeneousSymbol make_symbol_F(std::shared_ptr<const BoundaryMetric> metric) {
    auto num = [metric](std::span<const double> x, std::span<const double> eta) {
        return symbol_F(*metric, x, eta);
    };
    return {1.0, "F", num, {},
            HomogeneousSymbol::Ellipsoid{[](std::span<const double>) { return 2.0; }, metric}};
}

inline HomogeneousSymbol make_symbol_Theta(std::shared_ptr<const BoundaryMetric> metric) {
    auto num = [metric](std::span<const double> x, std::span<const double> eta) {
        return symbol_Theta(*metric, x, eta);
    };
    return {3.0, "Theta", num, {},
            HomogeneousSymbol::Ellipsoid{[](std::span<const double>) { return 2.0; }, metric}};
}

/// Degree-0 constant symbol c.
inline HomogeneousSymbol make_constant_symbol(double c) {
    auto num = [c](std::span<const double>, std::span<const double>) { return c; };
    return {0.0, "const", num, {},
            HomogeneousSymbol::Ellipsoid{[c](std::span<const double>) { return c; }, nullptr}};
}

/// Multiplication by 1/(ρ(x') + ε), degree 0.
inline HomogeneousSymbol make_reciprocal_weight(BoundaryWeight weight) {
    auto shared = std::make_shared<const BoundaryWeight>(std::move(weight));
    auto num = [](std::span<const double>, std::span<const double>) { return 1.0; };
    auto den = [shared](std::span<const double> x) { return shared->regularized(x); };
    auto coef = [shared](std::span<const double> x) { return 1.0 / shared->regularized(x); };
    return {0.0, "Z", num, den, HomogeneousSymbol::Ellipsoid{coef, nullptr}};
}

/// Principal symbol of A∘B: degrees add, values multiply.
inline HomogeneousSymbol symbol_compose(const HomogeneousSymbol& a, const HomogeneousSymbol& b) {
    auto num = [a, b](std::span<const double> x, std::span<const double> eta) {
        return a.numerator(x, eta) * b.numerator(x, eta);
    };
    HomogeneousSymbol::Denominator den;
    if (a.has_denominator() && b.has_denominator())
        den = [a, b](std::span<const double> x) { return a.denominator(x) * b.denominator(x); };
    else if (a.has_denominator())
        den = [a](std::span<const double> x) { return a.denominator(x); };
    else if (b.has_denominator())
        den = [b](std::span<const double> x) { return b.denominator(x); };

    std::optional<HomogeneousSymbol::Ellipsoid> ellipsoid;
    if (a.ellipsoid() && b.ellipsoid()) {
        const auto& ea = *a.ellipsoid();
        const auto& eb = *b.ellipsoid();
        if (!ea.metric || !eb.metric || ea.metric == eb.metric) {
            auto coef = [ca = ea.coefficient, cb = eb.coefficient](std::span<const double> x) {
                return ca(x) * cb(x);
            };
            ellipsoid = HomogeneousSymbol::Ellipsoid{coef, ea.metric ? ea.metric : eb.metric};
        }
    }
    return {a.degree() + b.degree(), a.label() + "*" + b.label(), num, den, ellipsoid};
}

/// HomogeneousSymbol form of symbol_steklov.
inline HomogeneousSymbol make_steklov_symbol(ProblemKind problem,
                                             std::shared_ptr<const BoundaryMetric> metric,
                                             BoundaryWeight weight) {
    const HomogeneousSymbol z = make_reciprocal_weight(std::move(weight));
    switch (problem) {
        case ProblemKind::NeumannTrace: return symbol_compose(z, make_symbol_F(metric));
        case ProblemKind::DirichletTrace:
            return symbol_compose(z, symbol_compose(z, symbol_compose(z, make_symbol_Theta(metric))));
        case ProblemKind::HarmonicSteklov:
            return symbol_compose(z, symbol_compose(make_constant_symbol(0.5), make_symbol_F(metric)));
    }
    throw std::logic_error("make_steklov_symbol: unknown problem kind");
}

/// |s(x', tη') - t^degree s(x', η')| / |t^degree s(x', η')|.
inline double homogeneity_defect(const HomogeneousSymbol& s, std::span<const double> x,
                                 std::span<const double> eta, double t) {
    std::vector<double> scaled(eta.begin(), eta.end());
    for (double& v : scaled) v *= t;
    const double expected = std::pow(t, s.degree()) * s.eval(x, eta);
    return std::abs(s.eval(x, scaled) - expected) / std::abs(expected);
}

}  // namespace bisteklov
