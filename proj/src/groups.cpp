#include "reflect/groups.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <random>

namespace reflect {

namespace {

// Projection used to bucket candidate matrices/points before the exact
// max-entry comparison.
Vector probe_direction(int d) {
  std::mt19937_64 rng(0x5eed1234ULL);
  std::normal_distribution<double> normal;
  Vector w(d);
  for (int i = 0; i < d; ++i) w(i) = normal(rng);
  return w.normalized();
}

// Interior point with a trivial stabilizer: distinct weights on each root row.
Vector generic_interior_point(const FundamentalSystem& fs) {
  const int d = fs.dimension();
  Vector weights(d);
  for (int i = 0; i < d; ++i) weights(i) = 1.0 + 0.173 * i;
  return fs.dual * weights;
}

double max_entry_distance(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

void write_le_double(std::ostream& os, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffU);
  os.write(bytes, 8);
}

std::uint64_t iteration_limit(const FundamentalSystem& fs) {
  constexpr std::uint64_t fallback = 10'000'000ULL;
  const auto order = group_order(fs.spec);
  if (!order || *order > std::numeric_limits<std::uint64_t>::max() / 10) return fallback;
  return std::max<std::uint64_t>(10 * *order, 10);
}

}  // namespace

Matrix reflection_matrix(const Vector& u) {
  const double norm2 = u.squaredNorm();
  if (!(std::sqrt(norm2) > tol::degenerate_vector)) {
    throw DegenerateVector("reflection vector has norm <= 1e-12");
  }
  const auto d = u.size();
  return Matrix::Identity(d, d) - (2.0 / norm2) * (u * u.transpose());
}

RealizedGroup realize(const FundamentalSystem& fs) {
  RealizedGroup g;
  g.fs = fs;
  for (int row : fs.root_rows()) g.generators.push_back(reflection_matrix(fs.roots.row(row).transpose()));
  return g;
}

RealizedGroup enumerate_group(const FundamentalSystem& fs, std::size_t cap) {
  if (cap < 1) throw RangeError("enumeration cap must be at least 1");
  RealizedGroup g = realize(fs);
  const int d = fs.dimension();
  const Vector w = probe_direction(d);
  const Vector c0 = generic_interior_point(fs);
  const double window = d * tol::dedup * c0.norm();

  std::vector<Matrix> elements{Matrix::Identity(d, d)};
  std::multimap<double, std::size_t> index;
  index.emplace(w.dot(c0), 0);
  std::deque<std::size_t> frontier{0};

  while (!frontier.empty()) {
    const std::size_t current = frontier.front();
    frontier.pop_front();
    for (const auto& gen : g.generators) {
      Matrix candidate = elements[current] * gen;
      const double key = w.dot(candidate * c0);
      bool seen = false;
      for (auto it = index.lower_bound(key - window); it != index.end() && it->first <= key + window; ++it) {
        if (max_entry_distance(elements[it->second], candidate) < tol::dedup) {
          seen = true;
          break;
        }
      }
      if (seen) continue;
      if (elements.size() >= cap) {
        g.overflow = true;
        return g;
      }
      index.emplace(key, elements.size());
      frontier.push_back(elements.size());
      elements.push_back(std::move(candidate));
    }
  }
  g.order = elements.size();
  g.elements = std::move(elements);
  return g;
}

ChamberPoint chamber_rep(const Vector& x, const FundamentalSystem& fs) {
  if (x.size() != fs.dimension()) throw DimensionMismatch("vector dimension does not match the group");
  if (!x.allFinite()) throw RangeError("chamber_rep needs a finite vector");
  const std::vector<int> rows = fs.root_rows();
  const std::uint64_t limit = iteration_limit(fs);

  ChamberPoint out{x, {}};
  for (std::uint64_t step = 0;; ++step) {
    int worst = -1;
    double worst_value = -tol::cone;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double v = fs.roots.row(rows[k]).dot(out.x);
      if (v < worst_value) {
        worst_value = v;
        worst = static_cast<int>(k);
      }
    }
    if (worst < 0) break;
    if (step >= limit) throw IterationLimit("chamber descent did not converge");
    const auto alpha = fs.roots.row(rows[worst]).transpose();
    out.x -= (2.0 * worst_value / alpha.squaredNorm()) * alpha;
    out.witness.push_back(worst);
  }
  return out;
}

Vector rep(const Vector& x, const FundamentalSystem& fs) { return chamber_rep(x, fs).x; }

bool in_closed_chamber(const Vector& x, const FundamentalSystem& fs, double tol) {
  for (int row : fs.root_rows()) {
    if (fs.roots.row(row).dot(x) < -tol) return false;
  }
  return true;
}

Vector chamber_interior_point(const FundamentalSystem& fs) {
  return fs.dual * Vector::Ones(fs.dimension());
}

std::vector<Vector> orbit(const Vector& x, const RealizedGroup& g) {
  if (!g.elements) throw ElementsUnavailable("group elements were not enumerated");
  if (x.size() != g.dimension()) throw DimensionMismatch("vector dimension does not match the group");
  const Vector w = probe_direction(g.dimension());
  const double window = std::sqrt(static_cast<double>(g.dimension())) * tol::dedup;
  std::vector<Vector> points;
  std::multimap<double, std::size_t> index;
  for (const auto& element : *g.elements) {
    Vector p = element * x;
    const double key = w.dot(p);
    bool seen = false;
    for (auto it = index.lower_bound(key - window); it != index.end() && it->first <= key + window; ++it) {
      if ((points[it->second] - p).cwiseAbs().maxCoeff() < tol::dedup) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      index.emplace(key, points.size());
      points.push_back(std::move(p));
    }
  }
  return points;
}

void write_elements_binary(std::ostream& os, const RealizedGroup& g) {
  if (!g.elements) throw ElementsUnavailable("group elements were not enumerated");
  for (const auto& m : *g.elements) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) write_le_double(os, m(i, j));
    }
  }
}

void write_elements_csv(std::ostream& os, const RealizedGroup& g) {
  if (!g.elements) throw ElementsUnavailable("group elements were not enumerated");
  os << std::setprecision(17);
  for (const auto& m : *g.elements) {
    bool first = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!first) os << ',';
        os << m(i, j);
        first = false;
      }
    }
    os << '\n';
  }
}

std::vector<Matrix> read_elements_binary(std::istream& is, int dimension) {
  std::vector<Matrix> out;
  const std::size_t record = static_cast<std::size_t>(dimension) * dimension * 8;
  std::vector<unsigned char> buffer(record);
  while (is.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(record))) {
    Matrix m(dimension, dimension);
    for (int k = 0; k < dimension * dimension; ++k) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buffer[8 * k + b]) << (8 * b);
      m(k / dimension, k % dimension) = std::bit_cast<double>(bits);
    }
    out.push_back(std::move(m));
  }
  if (is.gcount() != 0) throw RangeError("truncated element record");
  return out;
}

}  // namespace reflect
