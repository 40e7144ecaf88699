#include "cfnc/fp_enum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cfnc {

namespace {

constexpr double kPivotFloor = 1e-12;
constexpr double kEigenZero = 1e-12;
// Relative widening of each level's interval so points lying exactly on the
// ellipsoid surface (t_quant itself, for instance) survive rounding.
constexpr double kRadiusSlack = 1e-10;

}  // namespace

double CholeskyFactors::evaluate(std::span<const std::int64_t> t) const {
  const std::size_t n = size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double inner = static_cast<double>(t[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      inner += upper(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
               static_cast<double>(t[j]);
    }
    s += diag[i] * inner * inner;
  }
  return s;
}

CholeskyFactors cholesky(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  if (g.cols() != n || n == 0) throw CholeskyError("Cholesky input must be a non-empty square matrix");

  // Plain upper-triangular factor G = U^T U.
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double pivot = g(i, i);
    for (Eigen::Index k = 0; k < i; ++k) pivot -= u(k, i) * u(k, i);
    if (!(pivot > kPivotFloor)) {
      throw CholeskyError("matrix is not positive definite (pivot " + std::to_string(pivot) +
                          " at row " + std::to_string(i) + ")");
    }
    u(i, i) = std::sqrt(pivot);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = g(i, j);
      for (Eigen::Index k = 0; k < i; ++k) v -= u(k, i) * u(k, j);
      u(i, j) = v / u(i, i);
    }
  }

  CholeskyFactors f;
  f.diag.resize(static_cast<std::size_t>(n));
  f.upper = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.diag[static_cast<std::size_t>(i)] = u(i, i) * u(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) f.upper(i, j) = u(i, j) / u(i, i);
  }
  return f;
}

std::vector<std::int64_t> quantized_min_eigenvector(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
  if (solver.info() != Eigen::Success) {
    throw EigenSolverError("symmetric eigen-decomposition did not converge");
  }
  // Eigenvalues come back in increasing order.
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < kEigenZero) v(i) = 0.0;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  std::vector<std::int64_t> t(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) t[static_cast<std::size_t>(i)] = v(i) < 0.0 ? -1 : 1;
  return t;
}

double initial_radius(const Eigen::MatrixXd& g) {
  const auto t = quantized_min_eigenvector(g);
  return quadratic_form(g, t);
}

FinckePohstEnumerator::FinckePohstEnumerator(const CholeskyFactors& factors, double radius)
    : factors_(factors), radius_(radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("enumeration radius must be positive");
  const std::size_t n = factors.size();
  state_.level = n - 1;
  state_.offset.assign(n, 0.0);
  state_.residual.assign(n, 0.0);
  state_.lower.assign(n, 0);
  state_.upper.assign(n, -1);
  state_.point.assign(n, 0);
  state_.residual[n - 1] = radius;
}

void FinckePohstEnumerator::set_bounds(std::size_t k) {
  const double room = std::max(0.0, state_.residual[k] + kRadiusSlack * radius_);
  const double half_width = std::sqrt(room / factors_.diag[k]);
  const double center = -state_.offset[k];
  state_.upper[k] = static_cast<std::int64_t>(std::floor(center + half_width));
  state_.lower[k] = static_cast<std::int64_t>(std::ceil(center - half_width));
  state_.point[k] = state_.lower[k] - 1;
}

std::optional<CodingVector> FinckePohstEnumerator::next() {
  if (done_) return std::nullopt;
  const std::size_t n = factors_.size();
  auto& s = state_;
  for (;;) {
    if (need_bounds_) {
      set_bounds(s.level);
      need_bounds_ = false;
    }
    std::size_t k = s.level;
    if (++s.point[k] > s.upper[k]) {
      if (k == n - 1) {
        done_ = true;
        return std::nullopt;
      }
      s.level = k + 1;
      continue;
    }
    if (k == 0) {
      if (std::all_of(s.point.begin(), s.point.end(), [](std::int64_t v) { return v == 0; })) {
        done_ = true;
        return std::nullopt;
      }
      return CodingVector(s.point);
    }
    --k;
    double offset = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      offset += factors_.upper(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) *
                static_cast<double>(s.point[j]);
    }
    s.offset[k] = offset;
    const double shifted = s.offset[k + 1] + static_cast<double>(s.point[k + 1]);
    s.residual[k] = s.residual[k + 1] - factors_.diag[k + 1] * shifted * shifted;
    s.level = k;
    need_bounds_ = true;
  }
}

std::vector<CodingVector> enumerate_ellipsoid(const CholeskyFactors& factors, double radius) {
  std::vector<CodingVector> out;
  FinckePohstEnumerator walk(factors, radius);
  while (auto t = walk.next()) out.push_back(std::move(*t));
  return out;
}

CandidateTable candidate_set(const ChannelVector& h, Power p, std::size_t t_max, RateUnits units,
                             const CandidateSearchOptions& options) {
  if (t_max == 0) throw std::invalid_argument("T_max must be at least 1");
  const GramMatrix g = gram_matrix(h, p);
  const CholeskyFactors factors = cholesky(g);
  double radius = initial_radius(g);

  std::vector<CodingVector> found;
  for (int doublings = 0;; ++doublings) {
    found = enumerate_ellipsoid(factors, radius);
    if (found.size() >= t_max) break;
    if (doublings == options.max_doublings) {
      throw CapacityError("only " + std::to_string(found.size()) + " candidates after " +
                          std::to_string(options.max_doublings) + " radius doublings");
    }
    radius *= 2.0;
  }

  // Report each pair with its first nonzero entry positive.
  for (auto& t : found) {
    const auto e = t.entries();
    const auto lead = std::find_if(e.begin(), e.end(), [](std::int64_t v) { return v != 0; });
    if (*lead < 0) t = t.negated();
  }

  std::vector<double> rates(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) rates[i] = computation_rate(g, found[i], units);

  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rates[a] != rates[b]) return rates[a] > rates[b];
    return found[a] < found[b];
  });

  CandidateTable table;
  table.relay_index = h.relay_index();
  table.units = units;
  table.vectors.reserve(t_max);
  table.rates.reserve(t_max);
  for (std::size_t i = 0; i < t_max; ++i) {
    table.vectors.push_back(found[order[i]]);
    table.rates.push_back(rates[order[i]]);
  }
  return table;
}

}  // namespace cfnc
