// Recovers the boundary symbols of both model problems on a random coefficient
// block by finite differences and compares with the closed forms.

#include <cmath>
#include <cstdio>
#include <vector>

#include "bisteklov/bisteklov.hpp"

int main() {
    using namespace bisteklov;
    const auto a = random_metric_block(3, 7);
    const std::vector<double> eta{0.6, -0.8};
    const double L = std::ceil(30.0 / xi_norm(a, eta));
    for (int k = 32; k <= 256; k *= 2) {
        const HalfSpaceGrid grid{1.0 / k, L};
        const double p1 = bvp_solve_p1(a, {eta, {1.0, 0.0}}, grid).recovered;
        const double p2 = bvp_solve_p2(a, {eta, {1.0, 0.0}}, grid).recovered;
        std::printf("h=1/%-4d p1=%.10f p2=%.10f\n", k, p1, p2);
    }
    std::printf("exact    p1=%.10f p2=%.10f\n", halfspace_target_p1(a, eta), halfspace_target_p2(a, eta));
}
