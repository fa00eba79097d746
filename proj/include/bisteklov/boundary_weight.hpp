#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bisteklov {

/// Density ρ on a parametrized boundary, with the ε regularizer used when
/// dividing by ρ.
///
/// The boundary is described by a parameter box (one interval per boundary
/// dimension) and the area element ds/dparams. ρ and the area element take the
/// parameter vector; the same vector serves as the local boundary coordinate x'
/// for symbol evaluation.
struct BoundaryWeight {
    using Field = std::function<double(std::span<const double>)>;

    std::vector<std::pair<double, double>> box;
    Field area_element;
    Field rho;
    double epsilon = 0.0;

    int boundary_dim() const { return static_cast<int>(box.size()); }

    /// ρ(x') + ε, rejecting negative densities.
    double regularized(std::span<const double> x) const {
        const double r = rho(x);
        if (r < 0.0) throw std::domain_error("BoundaryWeight: negative rho sample");
        return r + epsilon;
    }

    static BoundaryWeight constant_density(double c) {
        return {{}, {}, [c](std::span<const double>) { return c; }, 0.0};
    }

    /// Unit circle parametrized by θ ∈ [0, 2π], ds = dθ.
    static BoundaryWeight unit_circle(Field rho, double epsilon = 0.0) {
        return {{{0.0, 2.0 * std::numbers::pi}},
                [](std::span<const double>) { return 1.0; },
                std::move(rho),
                epsilon};
    }

    /// Unit sphere S^{n-1} ⊂ R^n in hyperspherical angles
    /// (θ_1, ..., θ_{n-2}) ∈ [0, π], θ_{n-1} ∈ [0, 2π],
    /// ds = Π_k sin^{n-1-k}(θ_k) dθ.
    static BoundaryWeight unit_sphere(int n, Field rho, double epsilon = 0.0) {
        if (n < 2) throw std::invalid_argument("unit_sphere: need n >= 2");
        if (n == 2) return unit_circle(std::move(rho), epsilon);
        std::vector<std::pair<double, double>> box;
        for (int k = 0; k < n - 2; ++k) box.emplace_back(0.0, std::numbers::pi);
        box.emplace_back(0.0, 2.0 * std::numbers::pi);
        auto area = [n](std::span<const double> angles) {
            double a = 1.0;
            for (int k = 0; k < n - 2; ++k) a *= std::pow(std::sin(angles[k]), n - 2 - k);
            return a;
        };
        return {std::move(box), area, std::move(rho), epsilon};
    }
};

}  // namespace bisteklov
