#pragma once

// Optimal max filtering condition numbers, minimal optimal templates, the
// spectral symmetries of fundamental systems, and convex-duality certificates
// for the scalar/diagonal/completely-positive template programs.

#include "reflect/coxeter.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace reflect {

struct ComponentKappa {
  std::string label;
  double kappa = 1.0;
  double sigma_max = 1.0;
  double sigma_min = 1.0;
  bool trivial = true;
};

struct ConditionReport {
  GroupSpec spec;
  double kappa = 1.0;
  // Extreme singular values of the root matrix; the argmax component attains both.
  double sigma_max = 1.0;
  double sigma_min = 1.0;
  std::vector<ComponentKappa> per_component;
  Matrix templates;  // columns are minimal optimal templates
  std::size_t argmax_component = 0;
  std::vector<std::string> notes;
};

/// kappa(G) = max over components of sigma_max(A_i) / sigma_min(A_i), trivial
/// components contributing 1. Templates are the dual-basis columns; with more
/// than one component each block is rescaled to sigma_min = 1.
ConditionReport kappa_report(const GroupSpec& spec);
ConditionReport kappa_report(const FundamentalSystem& fs);

struct SingularExtremes {
  double max = 0.0;
  double min = 0.0;
};
SingularExtremes singular_extremes(const Matrix& m);

/// |p(kappa)| divided by the largest term magnitude |c_i| kappa^i.
/// Coefficients are listed from the leading term down.
double minimal_polynomial_residual(double kappa, const std::vector<long long>& coeffs);
/// Evaluates the residual at the kappa of an exceptional atom.
double minimal_polynomial_check(const Atom& atom, const std::vector<long long>& coeffs);

struct CheckResult {
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return residual < tolerance; }
};

struct EigenIdentityResult {
  double residual = 0.0;
  int evaluated = 0;  // eigenvectors compared
  int skipped = 0;    // eigenvectors with a near-degenerate eigenvalue
};

struct SpectralCheckReport {
  std::string group;
  CheckResult squared_entries;   // (v_top)_i^2 = (v_bottom)_i^2
  CheckResult spectrum_symmetry;  // lambda_{d-k+1}(M) = -lambda_k(M), M = A A^T - I
  CheckResult minor_symmetry;     // same for every principal submatrix M^(j)
  EigenIdentityResult eigen_identity;
  double eigen_identity_tolerance = 1e-8;

  bool pass() const {
    return squared_entries.pass() && spectrum_symmetry.pass() && minor_symmetry.pass() &&
           eigen_identity.residual < eigen_identity_tolerance;
  }
};

/// Root matrix of a single essential irreducible atom; throws RangeError for
/// trivial atoms or disconnected explicit diagrams.
Matrix atom_roots(const Atom& atom);

SpectralCheckReport spectral_checks(const Matrix& roots, std::string label = {});
SpectralCheckReport spectral_checks(const Atom& atom);

/// Compares |v_i|_j^2 prod_{k != i} (lambda_i - lambda_k) = prod_k (lambda_i - mu_k^(j))
/// against directly computed eigenvectors of M for every eigenpair whose
/// eigenvalue is separated from the rest by at least 1e-10.
EigenIdentityResult eigen_identity(const Matrix& roots);
double eigen_identity_check(const Atom& atom);

namespace certificate_tol {
inline constexpr double gap = 1e-8;
inline constexpr double diagonal = 1e-8;
inline constexpr double nuclear_slack = 1e-12;
inline constexpr double copositivity = -1e-9;
inline constexpr double kappa = 1e-9;
}  // namespace certificate_tol

struct DualCertificate {
  double c_star = 0.0;  // optimal scaling of B B^T
  double alpha = 0.0;   // |c_star B B^T - I|_2
  Matrix y;             // diagonal-program dual optimizer
  Matrix z;             // scalar-program dual optimizer (equal to y)
  double lambda_top = 0.0;     // eigenvalue of y on the top eigenvector of B B^T (negative)
  double lambda_bottom = 0.0;  // eigenvalue of y on the bottom eigenvector (positive)
  double gap_scalar = 0.0;
  double gap_diag = 0.0;
  double nuclear_norm_y = 0.0;
  double diag_residual = 0.0;        // max |diag(B^T Y B)|
  double copositivity_margin = 0.0;  // min over sampled x >= 0, |x| = 1 of -x^T B^T Y B x
  std::size_t copositivity_samples = 0;
  double kappa_from_alpha = 0.0;  // sqrt((1 + alpha) / (1 - alpha))
  double kappa_svd = 0.0;         // sigma_max(A) / sigma_min(A)

  /// Name of the first violated residual, or empty.
  std::string first_violation() const;
  /// Throws CertificateFailed naming the first violated residual.
  void validate() const;
};

/// Builds the certificate without validating it.
DualCertificate build_dual_certificate(const Matrix& roots, std::size_t samples = 100000, std::uint64_t seed = 0);
/// Builds and validates; throws CertificateFailed.
DualCertificate dual_certificate(const Atom& atom, std::size_t samples = 100000, std::uint64_t seed = 0);

/// |B diag(x) B^T - I|_2
double diagonal_objective(const Matrix& dual, const Vector& x);

/// Smallest value of diagonal_objective(c_star 1 + delta) - alpha over random
/// perturbations with |delta_i| <= step, clipped to keep x >= 0. Nonnegative
/// (up to rounding) when c_star 1 is locally optimal.
double diagonal_optimality_probe(const Matrix& roots, std::size_t trials, double step, std::uint64_t seed);

}  // namespace reflect
