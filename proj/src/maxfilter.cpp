#include "reflect/maxfilter.hpp"

#include "reflect/parallel.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

namespace reflect {

namespace {

constexpr double kDirectedStep = 1e-3;
constexpr double kMinDenominator = 1e-12;

void check_dims(const Vector& x, const Vector& y, int d) {
  if (x.size() != d || y.size() != d) throw DimensionMismatch("vector dimension does not match the group");
}

Vector unit_gaussian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  do {
    for (int i = 0; i < d; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Vector directed_base(const FundamentalSystem& fs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.5, 1.5);
  std::normal_distribution<double> normal;
  Vector w(fs.dimension());
  for (const auto& block : fs.blocks) {
    for (int i = 0; i < block.size; ++i) {
      w(block.offset + i) = block.trivial() ? normal(rng) : uniform(rng);
    }
  }
  return (fs.dual * w).normalized();
}

}  // namespace

double maxfilter_inner(const Vector& x, const Vector& y, const FundamentalSystem& fs) {
  check_dims(x, y, fs.dimension());
  return rep(x, fs).dot(rep(y, fs));
}

double maxfilter_inner(const Vector& x, const Vector& y, const RealizedGroup& g, Backend backend) {
  check_dims(x, y, g.dimension());
  if (backend == Backend::ChamberRep) return maxfilter_inner(x, y, g.fs);
  if (!g.elements) throw ElementsUnavailable("orbit brute force needs an enumerated group");
  // sup over both orbits reduces to one orbit by a change of variables.
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& element : *g.elements) best = std::max(best, (element * x).dot(y));
  return best;
}

Matrix MaxFilterBank::linearized() const {
  Matrix l(static_cast<Eigen::Index>(reps.size()), dimension());
  for (std::size_t i = 0; i < reps.size(); ++i) l.row(static_cast<Eigen::Index>(i)) = reps[i].transpose();
  return l;
}

MaxFilterBank make_bank(const FundamentalSystem& fs, std::vector<Vector> templates) {
  if (templates.empty()) throw RangeError("a filter bank needs at least one template");
  MaxFilterBank bank{fs, std::move(templates), {}};
  for (const auto& t : bank.templates) {
    if (t.size() != fs.dimension()) throw DimensionMismatch("template dimension does not match the group");
    bank.reps.push_back(rep(t, fs));
  }
  return bank;
}

MaxFilterBank make_bank(const FundamentalSystem& fs, const Matrix& columns) {
  std::vector<Vector> templates;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) templates.emplace_back(columns.col(j));
  return make_bank(fs, std::move(templates));
}

Vector filter_bank_apply(const MaxFilterBank& bank, const Vector& x) {
  if (x.size() != bank.dimension()) throw DimensionMismatch("input dimension does not match the bank");
  const Vector rx = rep(x, bank.fs);
  Vector out(static_cast<Eigen::Index>(bank.size()));
  for (std::size_t i = 0; i < bank.size(); ++i) out(static_cast<Eigen::Index>(i)) = bank.reps[i].dot(rx);
  return out;
}

LipschitzEstimate empirical_lipschitz(const MaxFilterBank& bank, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw RangeError("empirical_lipschitz needs at least 2 samples");
  const int d = bank.dimension();
  const Matrix l = bank.linearized();
  Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();

  LipschitzEstimate est;
  est.sigma_max = sv(0);
  // Fewer templates than dimensions leaves a kernel: sigma_min = 0.
  est.sigma_min = l.rows() < d ? 0.0 : sv(sv.size() - 1);
  const Vector top = svd.matrixV().col(0);
  const Vector bottom = svd.matrixV().col(d - 1);

  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vector, Vector>> pairs(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (i % 2 == 0) {
      pairs[i] = {unit_gaussian(rng, d), unit_gaussian(rng, d)};
    } else {
      const Vector y = directed_base(bank.fs, rng);
      const Vector& v = (i / 2) % 2 == 0 ? top : bottom;
      pairs[i] = {y + kDirectedStep * v, y};
    }
  }

  std::vector<double> quotient(n_samples, -1.0);
  parallel_for(n_samples, [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    const double denom = (rep(x, bank.fs) - rep(y, bank.fs)).norm();
    if (denom < kMinDenominator) return;
    quotient[i] = (filter_bank_apply(bank, x) - filter_bank_apply(bank, y)).norm() / denom;
  });

  est.lower = std::numeric_limits<double>::infinity();
  est.upper = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (quotient[i] < 0.0) continue;
    ++est.samples;
    est.quotients.push_back({i % 2 == 1, quotient[i]});
    if (quotient[i] < est.lower) {
      est.lower = quotient[i];
      est.argmin_pair = pairs[i];
    }
    if (quotient[i] > est.upper) {
      est.upper = quotient[i];
      est.argmax_pair = pairs[i];
    }
  }
  if (est.samples == 0) est.lower = 0.0;
  return est;
}

void write_bank_csv(std::ostream& os, const MaxFilterBank& bank) {
  for (int j = 0; j < bank.dimension(); ++j) os << (j ? "," : "") << 't' << j;
  os << '\n' << std::setprecision(17);
  for (const auto& t : bank.templates) {
    for (Eigen::Index j = 0; j < t.size(); ++j) os << (j ? "," : "") << t(j);
    os << '\n';
  }
}

void write_quotients_csv(std::ostream& os, const LipschitzEstimate& est) {
  os << "index,kind,quotient\n" << std::setprecision(17);
  for (std::size_t i = 0; i < est.quotients.size(); ++i) {
    os << i << ',' << (est.quotients[i].directed ? "directed" : "uniform") << ',' << est.quotients[i].quotient
       << '\n';
  }
}

}  // namespace reflect
