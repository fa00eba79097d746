#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bisteklov {

// The three boundary eigenvalue problems handled by the library.
//
//   NeumannTrace     Δ²u = 0,  u = 0,          Δu + λ ρ ∂u/∂ν = 0       (eigenvalues λ)
//   DirichletTrace   Δ²u = 0,  ∂u/∂ν = 0,      ∂(Δu)/∂ν = μ³ ρ³ u       (eigenvalues μ)
//   HarmonicSteklov  Δu  = 0,                  ∂u/∂ν = η ρ u            (eigenvalues η)
//
// ν is the inward unit normal throughout; on the unit sphere ∂/∂ν = -Σ x_i ∂_i.
enum class ProblemKind { NeumannTrace, DirichletTrace, HarmonicSteklov };

/// Short command-line name: "p1", "p2" or "harmonic".
inline std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::NeumannTrace: return "p1";
        case ProblemKind::DirichletTrace: return "p2";
        case ProblemKind::HarmonicSteklov: return "harmonic";
    }
    return "?";
}

inline ProblemKind parse_problem_kind(std::string_view text) {
    if (text == "p1") return ProblemKind::NeumannTrace;
    if (text == "p2") return ProblemKind::DirichletTrace;
    if (text == "harmonic") return ProblemKind::HarmonicSteklov;
    throw std::invalid_argument("unknown problem kind '" + std::string(text) +
                                "' (expected p1, p2 or harmonic)");
}

/// Power to which an eigenvalue is raised in its boundary condition (μ³ for DirichletTrace).
inline int spectral_power(ProblemKind kind) {
    return kind == ProblemKind::DirichletTrace ? 3 : 1;
}

/// Error raised when a computation would exceed a configured resource cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Error raised when a numerical solve fails (singular system, quadrature diagnostic).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bisteklov
