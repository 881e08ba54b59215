#pragma once

// Comparison of a generator with its reversible (symmetric) part.

#include "active/markov.hpp"

#include <optional>

namespace active {

/// Symmetrized Poisson form S_ij = [(v_i, -A^{-1} v_j) + (v_j, -A^{-1} v_i)] / 2.
Matrix poisson_form(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v);

struct ComparisonReport {
  Matrix generator;
  Matrix symmetric;
  Matrix active;            // poisson_form for A
  Matrix active_symmetric;  // poisson_form for sym(A)
  Matrix gap;               // active_symmetric - active, positive semidefinite
  double min_gap_eigenvalue = 0.0;
  double max_gap_magnitude = 0.0;
  bool reversible = false;
  bool dominated = false;   // min_gap_eigenvalue >= -slack
};

inline constexpr double kDominanceSlack = 1e-10;

ComparisonReport compare_to_reversible(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v);

struct SkewIdentity {
  double lhs = 0.0;  // (w, (I + C)^{-1} w)
  double mid = 0.0;  // (w, (I - C^2)^{-1} w)
  double rhs = 0.0;  // (w, w)
};
/// Throws std::invalid_argument unless C is skew-symmetric within 1e-12.
SkewIdentity skew_symmetric_identity(const Matrix& C, const Vector& w);

/// With B = -sym(A) and D the antisymmetric part, C = B^{-1/2} D B^{-1/2} on
/// mean-zero functions and w = B^{-1/2} v:
///   (v, -A^{-1} v) = (v, -sym(A)^{-1} v) + (w, C^2 (I - C^2)^{-1} w).
struct TaylorCheck {
  double form = 0.0;            // (v, -A^{-1} v)
  double symmetric_form = 0.0;  // (v, -sym(A)^{-1} v)
  double correction = 0.0;      // <= 0
  double c_norm = 0.0;          // spectral norm of C
  bool series_converges = false;
};
TaylorCheck taylor_check(const FiniteGenerator& gen, const StationaryMeasure& mu, const Vector& v);

struct DistinctnessResult {
  bool equal = false;
  Vector witness;  // mean-zero v with differing quadratic forms
  double form_a = 0.0;
  double form_b = 0.0;
  int probes = 0;
};
/// Probes e_i and e_i + e_j over an orthonormal mean-zero basis.
DistinctnessResult reversible_distinctness(const FiniteGenerator& a, const FiniteGenerator& b,
                                           const StationaryMeasure& mu);

struct NoDominanceResult {
  bool equal = false;
  bool found = false;
  Vector v;  // (v, -A^{-1} v) > (v, -B^{-1} v)
  Vector w;  // (w, -A^{-1} w) < (w, -B^{-1} w)
  double v_a = 0.0, v_b = 0.0, w_a = 0.0, w_b = 0.0;
};
/// Extreme eigenvectors of the difference of the inverse forms. Requires both
/// generators reversible and with the same diagonal.
NoDominanceResult no_dominant_reversible(const FiniteGenerator& a, const FiniteGenerator& b,
                                         const StationaryMeasure& mu);

}  // namespace active
