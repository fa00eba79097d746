// Counts Steklov-Neumann eigenvalues of the unit ball in R^3 and fits the
// second Weyl coefficient.

#include <cstdio>
#include <numbers>

#include "bisteklov/bisteklov.hpp"

int main() {
    using namespace bisteklov;
    const auto spectrum = ball_spectrum_p1(3, 500);
    const auto series = CountingSeries::at_eigenvalues(spectrum);
    for (int m : {0, 1, 10, 100, 500}) {
        const auto& s = series.samples[m];
        std::printf("m=%3d  lambda=%g  count=%s\n", m, s.tau, s.count.get_str().c_str());
    }
    const auto model = WeylModel::make(ProblemKind::NeumannTrace, 3, 4 * std::numbers::pi);
    const auto fit = remainder_fit(series, model);
    std::printf("second coefficient ~ %.6f (sharp: %s)\n", fit.second_coeff_estimate,
                fit.sharp_verdict ? "yes" : "no");
}
