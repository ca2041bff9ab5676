#include "reflect/asymptotics.hpp"
#include "reflect/conditioning.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace reflect;

namespace {

double cot_oracle(int l) { return 1.0 / std::tan(std::numbers::pi / (2.0 * (l + 1))); }

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("dihedral closed form examples") {
  CHECK(kappa_dihedral_closed_form(3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(kappa_dihedral_closed_form(4) == doctest::Approx(1.0 + std::numbers::sqrt2).epsilon(1e-14));
  CHECK(kappa_dihedral_closed_form(2000) / 2000.0 == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-3));
  CHECK_THROWS_AS(kappa_dihedral_closed_form(2), RangeError);
  for (int m = 3; m <= 40; ++m) {
    CHECK(std::abs(kappa_dihedral_closed_form(m) - kappa_report(parse_group_spec("I" + std::to_string(m))).kappa) <
          1e-12 * kappa_dihedral_closed_form(m));
    CHECK(std::abs(family_kappa(Family::I, m) - kappa_dihedral_closed_form(m)) < 1e-12 * kappa_dihedral_closed_form(m));
  }
}

TEST_CASE("A family matches the cotangent oracle") {
  for (int l = 1; l <= 200; ++l) {
    CAPTURE(l);
    CHECK(std::abs(family_kappa(Family::A, l) - cot_oracle(l)) < 1e-9);
  }
  for (int l : {1000, 2500, 5000}) {
    CHECK(std::abs(family_kappa(Family::A, l) / cot_oracle(l) - 1.0) < 1e-11);
  }
}

TEST_CASE("structured and dense solvers agree") {
  for (Family f : {Family::A, Family::B, Family::D}) {
    for (int l = 3; l <= 40; ++l) {
      CAPTURE(family_letter(f));
      CAPTURE(l);
      const double structured = family_kappa(f, l, SolverPath::Structured);
      const double dense = family_kappa(f, l, SolverPath::Dense);
      CHECK(std::abs(structured - dense) < 1e-10 * dense);
      const GroupSpec spec{{NamedFamily{f, l}}};
      CHECK(std::abs(structured - kappa_report(spec).kappa) < 1e-10 * dense);
    }
  }
}

TEST_CASE("tridiagonal extremes") {
  // Toeplitz tridiagonal(1, -1/2): eigenvalues 1 - cos(k pi / (n + 1)).
  const int n = 50;
  const TridiagonalExtremes e = unit_tridiagonal_extremes(std::vector<long double>(n - 1, -0.5L));
  CHECK(e.lambda_min == doctest::Approx(1.0 - std::cos(std::numbers::pi / (n + 1))).epsilon(1e-12));
  CHECK(e.lambda_max == doctest::Approx(1.0 + std::cos(std::numbers::pi / (n + 1))).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 30);
    std::vector<long double> off(m - 1);
    Matrix t = Matrix::Identity(m, m);
    for (int i = 0; i + 1 < m; ++i) {
      off[i] = u(rng);
      t(i, i + 1) = t(i + 1, i) = static_cast<double>(off[i]);
    }
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(t).eigenvalues();
    const TridiagonalExtremes got = unit_tridiagonal_extremes(off);
    CHECK(got.lambda_min == doctest::Approx(ev(0)).epsilon(1e-10));
    CHECK(got.lambda_max == doctest::Approx(ev(m - 1)).epsilon(1e-10));
  }
}

TEST_CASE("large rank ratios") {
  const double a = family_kappa(Family::A, 1000) / 1000.0;
  CHECK(std::abs(a / (2.0 / std::numbers::pi) - 1.0) < 2e-3);
  const double b = family_kappa(Family::B, 1000);
  CHECK(std::abs(b / 1000.0 / (4.0 / std::numbers::pi) - 1.0) < 1e-2);
  const double d = family_kappa(Family::D, 1000);
  CHECK(std::abs(d - b) / b < 1e-2);
}

TEST_CASE("sweeps increase and converge") {
  const std::vector<int> ells = {100, 200, 400, 800, 1600};
  for (Family f : {Family::A, Family::B, Family::D}) {
    CAPTURE(family_letter(f));
    const SweepReport r = family_sweep(f, ells);
    REQUIRE(r.points.size() == ells.size());
    CHECK(r.limit_constant == limit_constant(f));
    int non_monotone = 0;
    for (std::size_t i = 1; i < r.points.size(); ++i) {
      CHECK(r.points[i].kappa > r.points[i - 1].kappa);
      const double prev = std::abs(r.points[i - 1].kappa_over_ell - r.limit_constant);
      const double cur = std::abs(r.points[i].kappa_over_ell - r.limit_constant);
      if (cur >= prev) {
        ++non_monotone;
        CHECK(cur - prev < 1e-6);
      }
    }
    CHECK(non_monotone <= 1);
    const auto& tail = r.points.back();
    CHECK(r.max_relative_gap_at_tail ==
          doctest::Approx(std::abs(tail.kappa_over_ell - r.limit_constant) / r.limit_constant));
  }
}

TEST_CASE("sweep strictly increasing at small ranks") {
  std::vector<int> ells;
  for (int l = 3; l <= 60; ++l) ells.push_back(l);
  for (Family f : {Family::A, Family::B, Family::D}) {
    const SweepReport r = family_sweep(f, ells);
    for (std::size_t i = 1; i < r.points.size(); ++i) CHECK(r.points[i].kappa > r.points[i - 1].kappa);
  }
}

TEST_CASE("sweep deduplicates and validates") {
  const SweepReport r = family_sweep(Family::A, {5, 3, 5, 4});
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0].ell == 3);
  CHECK(r.points[2].ell == 5);
  CHECK_THROWS_AS(family_sweep(Family::B, {1}), RangeError);
  CHECK_THROWS_AS(family_sweep(Family::A, {5001}), RangeError);
  CHECK_THROWS_AS(family_kappa(Family::I, 2), RangeError);
  CHECK_THROWS_AS(family_kappa(Family::E, 6), RangeError);

  std::ostringstream csv;
  write_sweep_csv(csv, r);
  CHECK(csv.str().rfind("ell,kappa,kappa_over_ell\n3,", 0) == 0);
}

TEST_CASE("parse_ells forms") {
  CHECK(parse_ells("100:1600:x2") == std::vector<int>{100, 200, 400, 800, 1600});
  CHECK(parse_ells("3:6") == std::vector<int>{3, 4, 5, 6});
  CHECK(parse_ells("3:13:+5") == std::vector<int>{3, 8, 13});
  CHECK(parse_ells("7,3:4") == std::vector<int>{7, 3, 4});
  for (const char* bad : {"", "a", "3:", "3:10:x1", "10:3", "3:10:*2", "3,,4"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_ells(bad), ParseError);
  }
}

TEST_CASE("pixel embedding preserves the operator norm") {
  std::mt19937_64 rng(21);
  CHECK(pixel_embed(Matrix::Identity(7, 7)).operator_norm == doctest::Approx(1.0).epsilon(1e-14));
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    Matrix a(n, n);
    for (int j = 0; j < n; ++j) a.col(j) = testing::gaussian(rng, n);
    const DiscreteKernel k = pixel_embed(a);
    CHECK(k.n == n);
    CHECK(testing::max_abs(k.values - n * a) < 1e-12 * (1.0 + testing::max_abs(n * a)));
    // Operator of the step kernel on step functions equals values / n.
    const double via_steps = Eigen::JacobiSVD<Matrix>(k.values / n).singularValues()(0);
    CHECK(std::abs(k.operator_norm - via_steps) < 1e-12 * via_steps);
    CHECK(std::abs(k.operator_norm - Eigen::JacobiSVD<Matrix>(a).singularValues()(0)) < 1e-12 * via_steps);
  }
  CHECK_THROWS_AS(pixel_embed(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("bordered factor and its inverse") {
  for (int d : {1, 2, 3, 10, 50, 200, 500}) {
    CAPTURE(d);
    const Matrix s = bordered_factor(d);
    const Matrix s_inv = bordered_factor_inverse(d);
    CHECK(s.rows() == d + 1);
    CHECK(testing::max_abs(s * s_inv - Matrix::Identity(d + 1, d + 1)) < 1e-10);
    Matrix m = Matrix::Identity(d + 1, d + 1);
    m.topLeftCorner(d, d) = gram_matrix(coxeter_matrix(NamedFamily{Family::A, d}));
    CHECK(testing::max_abs(s.transpose() * s - m) < 1e-10);
  }
}

TEST_CASE("B family standard roots") {
  for (int d : {2, 3, 8, 40}) {
    const Matrix a = b_family_standard_roots(d);
    const Matrix b = b_family_standard_dual(d);
    CHECK(testing::max_abs(a * b - Matrix::Identity(d, d)) < 1e-12);
    const Matrix gram = gram_matrix(coxeter_matrix(NamedFamily{Family::B, d}));
    CHECK(testing::max_abs(a * a.transpose() - gram) < 1e-12);
    const double k = singular_extremes(a).max / singular_extremes(a).min;
    CHECK(k == doctest::Approx(family_kappa(Family::B, d)).epsilon(1e-10));
  }
}

TEST_CASE("scaled inverses approach the limit kernels") {
  std::vector<double> a_dist;
  std::vector<double> b_dist;
  for (int d : {25, 50, 100, 200}) {
    a_dist.push_back(l2_distance(pixel_embed(bordered_factor_inverse(d) / (d + 1)), KernelId::AFamily));
    b_dist.push_back(l2_distance(pixel_embed(b_family_standard_dual(d) / d), KernelId::VolterraAdjoint));
  }
  for (std::size_t i = 1; i < a_dist.size(); ++i) {
    CHECK(a_dist[i] < a_dist[i - 1]);
    CHECK(b_dist[i] < b_dist[i - 1]);
  }
  // The jump along the diagonal limits the rate to d^(-1/2).
  CHECK(a_dist[3] / a_dist[1] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(b_dist[3] / b_dist[1] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(a_dist.back() < 1.0 / std::sqrt(200.0));
  CHECK(b_dist.back() < 1.0 / std::sqrt(200.0));
}

TEST_CASE("kernel values") {
  CHECK(kernel_value(KernelId::AFamily, 0.75, 0.25) == doctest::Approx(std::numbers::sqrt2 * 0.25));
  CHECK(kernel_value(KernelId::AFamily, 0.25, 0.75) == doctest::Approx(-std::numbers::sqrt2 * 0.25));
  CHECK(kernel_value(KernelId::VolterraAdjoint, 0.25, 0.75) == doctest::Approx(std::numbers::sqrt2));
  CHECK(kernel_value(KernelId::VolterraAdjoint, 0.75, 0.25) == 0.0);
  CHECK(kernel_norm_exact(KernelId::AFamily) == doctest::Approx(std::numbers::sqrt2 / std::numbers::pi));
  const DiscreteKernel k = discretize_kernel(KernelId::AFamily, 32);
  CHECK(k.values.rows() == 32);
  REQUIRE(k.kernel_id.has_value());
  CHECK(*k.kernel_id == KernelId::AFamily);
  CHECK(l2_distance(discretize_kernel(KernelId::AFamily, 64), KernelId::AFamily) <
        l2_distance(discretize_kernel(KernelId::AFamily, 16), KernelId::AFamily));
}

TEST_CASE("kernel norm estimates") {
  CHECK(kernel_norm_estimate(KernelId::AFamily, 400) ==
        doctest::Approx(kernel_norm_exact(KernelId::AFamily)).epsilon(5e-3));
  CHECK(kernel_norm_estimate(KernelId::VolterraAdjoint, 400) ==
        doctest::Approx(kernel_norm_exact(KernelId::VolterraAdjoint)).epsilon(5e-3));
  CHECK(eigenfunction_residual(400) < 1e-2);
  CHECK_THROWS_AS(kernel_norm_estimate(KernelId::AFamily, 15), RangeError);
  CHECK_THROWS_AS(eigenfunction_residual(8), RangeError);
}

}  // TEST_SUITE
