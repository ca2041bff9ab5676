#include "reflect/conditioning.hpp"

#include "reflect/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace reflect {

namespace {

constexpr double kSpectralTolerance = 1e-9;
constexpr double kEigenIdentityTolerance = 1e-8;
constexpr double kDegenerateGap = 1e-10;
constexpr std::size_t kCopositivityChunk = 1024;

// A block is "aligned" when its rows vanish outside its own columns; the
// square diagonal block then carries exactly the atom's Cholesky factor.
bool aligned(const FundamentalSystem& fs, std::size_t b) {
  const Block& block = fs.blocks[b];
  const Matrix rows = fs.block_rows(b);
  const int end = block.offset + block.size;
  return rows.leftCols(block.offset).isZero(0.0) && rows.rightCols(rows.cols() - end).isZero(0.0);
}

Matrix compact_rows(const FundamentalSystem& fs, std::size_t b) {
  const Block& block = fs.blocks[b];
  if (aligned(fs, b)) return fs.roots.block(block.offset, block.offset, block.size, block.size);
  return fs.block_rows(b);
}

Matrix minor(const Matrix& m, int j) {
  const int d = static_cast<int>(m.rows());
  Matrix out(d - 1, d - 1);
  for (int r = 0, rr = 0; r < d; ++r) {
    if (r == j) continue;
    for (int c = 0, cc = 0; c < d; ++c) {
      if (c == j) continue;
      out(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return out;
}

double symmetry_residual(const Vector& ascending) {
  const auto n = ascending.size();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) worst = std::max(worst, std::abs(ascending(k) + ascending(n - 1 - k)));
  return worst;
}

Matrix offdiagonal_gram(const Matrix& roots) {
  return roots * roots.transpose() - Matrix::Identity(roots.rows(), roots.rows());
}

}  // namespace

SingularExtremes singular_extremes(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  return {sv(0), sv(sv.size() - 1)};
}

ConditionReport kappa_report(const GroupSpec& spec) { return kappa_report(fundamental_system(spec)); }

ConditionReport kappa_report(const FundamentalSystem& fs) {
  const int d = fs.dimension();
  ConditionReport report;
  report.spec = fs.spec;
  report.templates = Matrix::Zero(d, d);
  const bool single = fs.blocks.size() == 1;
  bool found = false;

  for (std::size_t b = 0; b < fs.blocks.size(); ++b) {
    const Block& block = fs.blocks[b];
    ComponentKappa entry;
    entry.label = render_atom(block.atom);
    entry.trivial = block.trivial();
    auto columns = fs.dual.middleCols(block.offset, block.size);
    if (entry.trivial) {
      report.templates.middleCols(block.offset, block.size) = columns;
    } else {
      const SingularExtremes s = singular_extremes(compact_rows(fs, b));
      entry.sigma_max = s.max;
      entry.sigma_min = s.min;
      entry.kappa = s.max / s.min;
      // sigma_min(B_i) = 1 / sigma_max(A_i)
      report.templates.middleCols(block.offset, block.size) = single ? Matrix(columns) : Matrix(columns * s.max);
    }
    if (!found || entry.kappa > report.kappa) {
      found = true;
      report.kappa = entry.kappa;
      report.sigma_max = entry.sigma_max;
      report.sigma_min = entry.sigma_min;
      report.argmax_component = b;
    }
    if (const auto* named = std::get_if<NamedFamily>(&block.atom);
        named && named->family == Family::D && named->parameter == 3) {
      report.notes.push_back("D3 is realized by the A3 diagram");
    }
    report.per_component.push_back(std::move(entry));
  }
  return report;
}

double minimal_polynomial_residual(double kappa, const std::vector<long long>& coeffs) {
  if (coeffs.empty()) throw RangeError("empty polynomial");
  long double value = 0.0L;
  long double scale = 0.0L;
  const long double x = kappa;
  long double power = 1.0L;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    value += static_cast<long double>(*it) * power;
    scale = std::max(scale, std::abs(static_cast<long double>(*it)) * power);
    power *= x;
  }
  return static_cast<double>(std::abs(value) / scale);
}

double minimal_polynomial_check(const Atom& atom, const std::vector<long long>& coeffs) {
  return minimal_polynomial_residual(kappa_report(GroupSpec{{atom}}).kappa, coeffs);
}

Matrix atom_roots(const Atom& atom) {
  if (is_trivial(atom)) throw RangeError("expected an essential irreducible atom, got " + render_atom(atom));
  validate_atom(atom);
  if (const auto* diagram = std::get_if<ExplicitDiagram>(&atom); diagram && !diagram->matrix.irreducible()) {
    throw RangeError("explicit diagram is not irreducible");
  }
  return fundamental_system(GroupSpec{{atom}}).roots;
}

SpectralCheckReport spectral_checks(const Matrix& roots, std::string label) {
  SpectralCheckReport report;
  report.group = std::move(label);
  report.squared_entries.tolerance = kSpectralTolerance;
  report.spectrum_symmetry.tolerance = kSpectralTolerance;
  report.minor_symmetry.tolerance = kSpectralTolerance;
  report.eigen_identity_tolerance = kEigenIdentityTolerance;

  const int d = static_cast<int>(roots.rows());
  const Matrix m = offdiagonal_gram(roots);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const Vector top = eig.eigenvectors().col(d - 1);
  const Vector bottom = eig.eigenvectors().col(0);
  report.squared_entries.residual = (top.cwiseAbs2() - bottom.cwiseAbs2()).cwiseAbs().maxCoeff();
  report.spectrum_symmetry.residual = symmetry_residual(eig.eigenvalues());
  for (int j = 0; j < d && d > 1; ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> sub(minor(m, j), Eigen::EigenvaluesOnly);
    report.minor_symmetry.residual = std::max(report.minor_symmetry.residual, symmetry_residual(sub.eigenvalues()));
  }
  report.eigen_identity = eigen_identity(roots);
  return report;
}

SpectralCheckReport spectral_checks(const Atom& atom) { return spectral_checks(atom_roots(atom), render_atom(atom)); }

EigenIdentityResult eigen_identity(const Matrix& roots) {
  EigenIdentityResult result;
  const int d = static_cast<int>(roots.rows());
  if (d < 2) return result;
  const Matrix m = offdiagonal_gram(roots);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const Vector& lambda = eig.eigenvalues();
  std::vector<Vector> minor_spectra;
  for (int j = 0; j < d; ++j) {
    minor_spectra.push_back(Eigen::SelfAdjointEigenSolver<Matrix>(minor(m, j), Eigen::EigenvaluesOnly).eigenvalues());
  }

  for (int i = 0; i < d; ++i) {
    long double denominator = 1.0L;
    bool degenerate = false;
    for (int k = 0; k < d; ++k) {
      if (k == i) continue;
      const double gap = lambda(i) - lambda(k);
      if (std::abs(gap) < kDegenerateGap) degenerate = true;
      denominator *= gap;
    }
    if (degenerate) {
      ++result.skipped;
      continue;
    }
    ++result.evaluated;
    for (int j = 0; j < d; ++j) {
      long double numerator = 1.0L;
      for (Eigen::Index k = 0; k < minor_spectra[j].size(); ++k) numerator *= lambda(i) - minor_spectra[j](k);
      const double predicted = static_cast<double>(numerator / denominator);
      const double direct = eig.eigenvectors()(j, i) * eig.eigenvectors()(j, i);
      result.residual = std::max(result.residual, std::abs(predicted - direct));
    }
  }
  return result;
}

double eigen_identity_check(const Atom& atom) {
  const Matrix roots = atom_roots(atom);
  if (roots.rows() < 2) throw RangeError("eigenvector-eigenvalue identity needs d >= 2");
  return eigen_identity(roots).residual;
}

std::string DualCertificate::first_violation() const {
  std::ostringstream os;
  os.precision(3);
  if (!(gap_scalar < certificate_tol::gap)) {
    os << "gap_scalar = " << gap_scalar;
  } else if (!(gap_diag < certificate_tol::gap)) {
    os << "gap_diag = " << gap_diag;
  } else if (!(diag_residual < certificate_tol::diagonal)) {
    os << "diag(B^T Y B) residual = " << diag_residual;
  } else if (!(nuclear_norm_y <= 1.0 + certificate_tol::nuclear_slack)) {
    os << "nuclear norm of Y = " << std::setprecision(17) << nuclear_norm_y;
  } else if (!(copositivity_margin >= certificate_tol::copositivity)) {
    os << "copositivity margin = " << copositivity_margin;
  } else if (!(std::abs(kappa_from_alpha - kappa_svd) < certificate_tol::kappa)) {
    os << "kappa mismatch = " << std::abs(kappa_from_alpha - kappa_svd);
  }
  return os.str();
}

void DualCertificate::validate() const {
  if (auto violation = first_violation(); !violation.empty()) throw CertificateFailed(violation);
}

DualCertificate build_dual_certificate(const Matrix& roots, std::size_t samples, std::uint64_t seed) {
  const int d = static_cast<int>(roots.rows());
  const Matrix b = roots.inverse();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b * b.transpose());
  const double s_top = eig.eigenvalues()(d - 1);
  const double s_bottom = eig.eigenvalues()(0);
  const Vector u_top = eig.eigenvectors().col(d - 1);
  const Vector u_bottom = eig.eigenvectors().col(0);

  DualCertificate cert;
  cert.c_star = 2.0 / (s_top + s_bottom);
  cert.alpha = std::max(std::abs(cert.c_star * s_top - 1.0), std::abs(cert.c_star * s_bottom - 1.0));
  cert.lambda_top = -s_bottom / (s_top + s_bottom);
  cert.lambda_bottom = s_top / (s_top + s_bottom);
  cert.y = cert.lambda_top * u_top * u_top.transpose() + cert.lambda_bottom * u_bottom * u_bottom.transpose();
  cert.z = cert.y;
  cert.gap_diag = std::abs(cert.y.trace() - cert.alpha);
  cert.gap_scalar = std::abs(cert.z.trace() - cert.alpha);

  Eigen::SelfAdjointEigenSolver<Matrix> yeig(cert.y, Eigen::EigenvaluesOnly);
  cert.nuclear_norm_y = yeig.eigenvalues().cwiseAbs().sum();

  const Matrix p = b.transpose() * cert.y * b;
  cert.diag_residual = p.diagonal().cwiseAbs().maxCoeff();

  const std::size_t chunks = (samples + kCopositivityChunk - 1) / kCopositivityChunk;
  std::vector<double> chunk_min(chunks, std::numeric_limits<double>::infinity());
  parallel_for(chunks, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    const std::size_t end = std::min(samples, (c + 1) * kCopositivityChunk);
    Vector x(d);
    for (std::size_t s = c * kCopositivityChunk; s < end; ++s) {
      do {
        for (int i = 0; i < d; ++i) x(i) = std::abs(normal(rng));
      } while (x.norm() < 1e-12);
      x.normalize();
      chunk_min[c] = std::min(chunk_min[c], -x.dot(p * x));
    }
  });
  cert.copositivity_samples = samples;
  cert.copositivity_margin = chunks == 0 ? 0.0 : *std::min_element(chunk_min.begin(), chunk_min.end());

  cert.kappa_from_alpha = std::sqrt((1.0 + cert.alpha) / (1.0 - cert.alpha));
  const SingularExtremes s = singular_extremes(roots);
  cert.kappa_svd = s.max / s.min;
  return cert;
}

DualCertificate dual_certificate(const Atom& atom, std::size_t samples, std::uint64_t seed) {
  DualCertificate cert = build_dual_certificate(atom_roots(atom), samples, seed);
  cert.validate();
  return cert;
}

double diagonal_objective(const Matrix& dual, const Vector& x) {
  if (x.size() != dual.cols()) throw DimensionMismatch("diagonal variable has the wrong length");
  const Matrix m = dual * x.asDiagonal() * dual.transpose() - Matrix::Identity(dual.rows(), dual.rows());
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

double diagonal_optimality_probe(const Matrix& roots, std::size_t trials, double step, std::uint64_t seed) {
  const int d = static_cast<int>(roots.rows());
  const Matrix b = roots.inverse();
  const DualCertificate cert = build_dual_certificate(roots, 0, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-step, step);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x(i) = std::max(0.0, cert.c_star + uniform(rng));
    best = std::min(best, diagonal_objective(b, x) - cert.alpha);
  }
  return best;
}

}  // namespace reflect
