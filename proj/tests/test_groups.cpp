#include "reflect/groups.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

using namespace reflect;

namespace {

std::size_t distinct_count(const std::vector<Vector>& points, double eps) {
  std::vector<Vector> kept;
  for (const auto& p : points) {
    bool seen = false;
    for (const auto& q : kept) {
      if ((p - q).cwiseAbs().maxCoeff() < eps) {
        seen = true;
        break;
      }
    }
    if (!seen) kept.push_back(p);
  }
  return kept.size();
}

}  // namespace

TEST_SUITE("groups") {

TEST_CASE("reflection matrices") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 8);
    const Vector u = testing::gaussian(rng, d);
    const Matrix r = reflection_matrix(u);
    CHECK(testing::max_abs(r * r - Matrix::Identity(d, d)) < 1e-13);
    CHECK(testing::max_abs(r.transpose() * r - Matrix::Identity(d, d)) < 1e-13);
    CHECK(r.determinant() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(testing::max_abs(r * u + u) < 1e-12);
  }
  CHECK_THROWS_AS(reflection_matrix(Vector::Zero(3)), DegenerateVector);
  CHECK_THROWS_AS(reflection_matrix(Vector::Constant(2, 1e-14)), DegenerateVector);
}

TEST_CASE("generators are orthogonal involutions with determinant -1") {
  for (const auto& atom : testing::small_atoms()) {
    CAPTURE(render_atom(atom));
    const RealizedGroup g = realize(fundamental_system(GroupSpec{{atom}}));
    const int d = g.dimension();
    CHECK(g.generators.size() == static_cast<std::size_t>(atom_dimension(atom)));
    for (const auto& s : g.generators) {
      CHECK(testing::max_abs(s.transpose() * s - Matrix::Identity(d, d)) < 1e-12);
      CHECK(testing::max_abs(s * s - Matrix::Identity(d, d)) < 1e-12);
      CHECK(s.determinant() == doctest::Approx(-1.0).epsilon(1e-10));
    }
    CHECK_FALSE(g.elements.has_value());
  }
}

TEST_CASE("generator products have the Coxeter orders") {
  for (const char* text : {"A3", "B3", "H3", "I7", "F4", "D4"}) {
    CAPTURE(text);
    const GroupSpec spec = parse_group_spec(text);
    const RealizedGroup g = realize(fundamental_system(spec));
    const CoxeterMatrix cm = coxeter_matrix(spec.components[0]);
    const int d = g.dimension();
    for (int i = 0; i < cm.rank(); ++i) {
      for (int j = i + 1; j < cm.rank(); ++j) {
        const Matrix st = g.generators[i] * g.generators[j];
        Matrix power = Matrix::Identity(d, d);
        for (int k = 1; k < cm(i, j); ++k) {
          power = power * st;
          CHECK(testing::max_abs(power - Matrix::Identity(d, d)) > 1e-6);
        }
        power = power * st;
        CHECK(testing::max_abs(power - Matrix::Identity(d, d)) < 1e-10);
      }
    }
  }
}

TEST_CASE("enumeration matches known orders") {
  const std::vector<std::pair<const char*, std::size_t>> cases = {
      {"I4", 8}, {"T3", 1}, {"A3", 24}, {"A1", 2}, {"B3", 48}, {"D4", 192},
      {"H3", 120}, {"F4", 1152}, {"I7 x A1", 28}, {"A2 x T2", 6}, {"B4", 384}};
  for (const auto& [text, order] : cases) {
    CAPTURE(text);
    const RealizedGroup g = enumerate_group(fundamental_system(parse_group_spec(text)));
    REQUIRE(g.elements.has_value());
    CHECK(g.elements->size() == order);
    CHECK(g.order == order);
    CHECK_FALSE(g.overflow);
  }
}

TEST_CASE("enumeration respects the cap") {
  const RealizedGroup g = enumerate_group(fundamental_system(parse_group_spec("B4")), 100);
  CHECK(g.overflow);
  CHECK_FALSE(g.elements.has_value());
  CHECK_THROWS_AS(orbit(Vector::Ones(4), g), ElementsUnavailable);
}

TEST_CASE("enumerated elements are orthogonal and closed under multiplication") {
  const RealizedGroup g = enumerate_group(fundamental_system(parse_group_spec("H3")));
  REQUIRE(g.elements.has_value());
  const auto& elems = *g.elements;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix& a = elems[rng() % elems.size()];
    const Matrix& b = elems[rng() % elems.size()];
    CHECK(testing::max_abs(a.transpose() * a - Matrix::Identity(3, 3)) < 1e-10);
    const Matrix prod = a * b;
    bool found = false;
    for (const auto& e : elems) {
      if ((prod - e).cwiseAbs().maxCoeff() < 1e-8) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("I4 chamber representative example") {
  const FundamentalSystem fs = fundamental_system(parse_group_spec("I4"));
  Vector x(2);
  x << -1.0, 0.0;
  const ChamberPoint cp = chamber_rep(x, fs);
  CHECK(in_closed_chamber(cp.x, fs));
  CHECK(cp.x.norm() == doctest::Approx(1.0).epsilon(1e-14));
  // rep(x) is the unique orbit point in the chamber.
  const RealizedGroup g = enumerate_group(fs);
  std::size_t in_chamber = 0;
  for (const auto& p : orbit(x, g)) {
    if (in_closed_chamber(p, fs, 1e-9)) ++in_chamber;
  }
  CHECK(in_chamber == 1);
}

TEST_CASE("rep invariants on random points") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    GroupSpec spec;
    const int atoms = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < atoms; ++k) spec.components.push_back(testing::random_atom(rng));
    const FundamentalSystem fs = fundamental_system(spec);
    const Vector x = testing::gaussian(rng, fs.dimension());
    CAPTURE(render(spec));
    const ChamberPoint cp = chamber_rep(x, fs);
    CHECK(in_closed_chamber(cp.x, fs));
    CHECK(std::abs(cp.x.norm() - x.norm()) < 1e-10 * (1.0 + x.norm()));
    CHECK(testing::max_abs(rep(cp.x, fs) - cp.x) < 1e-12);

    // Replaying the witness reproduces the representative.
    const RealizedGroup g = realize(fs);
    Vector y = x;
    for (int idx : cp.witness) y = g.generators[idx] * y;
    CHECK(testing::max_abs(y - cp.x) < 1e-10);
  }
}

TEST_CASE("rep is constant on orbits") {
  std::mt19937_64 rng(3);
  for (const char* text : {"A3", "B3", "H3", "I5 x A1", "D4"}) {
    CAPTURE(text);
    const FundamentalSystem fs = fundamental_system(parse_group_spec(text));
    const RealizedGroup g = enumerate_group(fs);
    REQUIRE(g.elements.has_value());
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x = testing::gaussian(rng, fs.dimension());
      const Vector r = rep(x, fs);
      const Matrix& h = (*g.elements)[rng() % g.elements->size()];
      CHECK(testing::max_abs(rep(h * x, fs) - r) < 1e-10);
    }
  }
}

TEST_CASE("orbit sizes follow the stabilizer") {
  const FundamentalSystem fs = fundamental_system(parse_group_spec("A3"));
  const RealizedGroup g = enumerate_group(fs);
  std::mt19937_64 rng(8);
  // Generic point: free orbit.
  CHECK(orbit(testing::gaussian(rng, 3), g).size() == 24);
  // Fundamental coweight: stabilizer A2, orbit of size 4.
  CHECK(orbit(fs.dual.col(0), g).size() == 4);
  // Middle coweight: stabilizer A1 x A1, orbit of size 6.
  CHECK(orbit(fs.dual.col(1), g).size() == 6);
  CHECK(orbit(Vector::Zero(3), g).size() == 1);

  const auto pts = orbit(testing::gaussian(rng, 3), g);
  CHECK(distinct_count(pts, 1e-8) == pts.size());
}

TEST_CASE("group elements are isometries") {
  std::mt19937_64 rng(77);
  const FundamentalSystem fs = fundamental_system(parse_group_spec("F4"));
  const RealizedGroup g = enumerate_group(fs);
  REQUIRE(g.elements.has_value());
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = testing::gaussian(rng, 4);
    const Vector y = testing::gaussian(rng, 4);
    const Matrix& h = (*g.elements)[rng() % g.elements->size()];
    CHECK(std::abs((h * x).dot(h * y) - x.dot(y)) < 1e-10);
  }
}

TEST_CASE("chamber interior point") {
  for (const auto& atom : testing::small_atoms()) {
    const FundamentalSystem fs = fundamental_system(GroupSpec{{atom}});
    const Vector p = chamber_interior_point(fs);
    const Vector v = fs.roots * p;
    for (int r : fs.root_rows()) CHECK(v(r) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("permutation system rep sorts descending") {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 7; ++n) {
    const FundamentalSystem fs = permutation_system(n);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x = testing::gaussian(rng, n);
      Vector sorted = x;
      std::sort(sorted.data(), sorted.data() + n, std::greater<>());
      CHECK(testing::max_abs(rep(x, fs) - sorted) < 1e-12);
    }
  }
}

TEST_CASE("binary dump round trip") {
  const RealizedGroup g = enumerate_group(fundamental_system(parse_group_spec("B3")));
  std::stringstream buffer;
  write_elements_binary(buffer, g);
  CHECK(buffer.str().size() == 48u * 9u * 8u);
  const auto back = read_elements_binary(buffer, 3);
  REQUIRE(back.size() == 48);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == (*g.elements)[i]);

  std::stringstream bad("1234567");
  CHECK_THROWS(read_elements_binary(bad, 3));
}

TEST_CASE("csv dump has one row per element") {
  const RealizedGroup g = enumerate_group(fundamental_system(parse_group_spec("I3")));
  std::stringstream buffer;
  write_elements_csv(buffer, g);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(buffer, line)) ++lines;
  CHECK(lines == 6);
}

TEST_CASE("elements unavailable without enumeration") {
  const RealizedGroup g = realize(fundamental_system(parse_group_spec("A2")));
  std::stringstream buffer;
  CHECK_THROWS_AS(write_elements_binary(buffer, g), ElementsUnavailable);
}

}  // TEST_SUITE
