#include "cfnc/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cfnc {

namespace {

// Forms this close to zero cannot come from a PD matrix and a nonzero
// integer vector; they mean the inputs were corrupted.
constexpr double kFormFloor = 1e-12;

double log_in(double x, RateUnits units) {
  return units == RateUnits::bits ? std::log2(x) : std::log(x);
}

}  // namespace

const char* to_string(RateUnits units) {
  return units == RateUnits::bits ? "bits" : "nats";
}

RateUnits parse_rate_units(const std::string& text) {
  if (text == "bits") return RateUnits::bits;
  if (text == "nats") return RateUnits::nats;
  throw std::invalid_argument("unknown rate units '" + text + "' (expected bits or nats)");
}

ChannelVector::ChannelVector(std::vector<double> entries, int relay_index)
    : entries_(std::move(entries)), relay_index_(relay_index) {
  if (entries_.empty()) throw std::invalid_argument("channel vector must be non-empty");
  for (double v : entries_) {
    if (!std::isfinite(v)) throw std::invalid_argument("channel gains must be finite");
  }
}

double ChannelVector::squared_norm() const {
  double s = 0.0;
  for (double v : entries_) s += v * v;
  return s;
}

Power Power::from_linear(double linear) {
  if (!(linear > 0.0) || !std::isfinite(linear)) {
    throw std::invalid_argument("power must be positive and finite");
  }
  return Power(linear);
}

Power Power::from_db(double db) { return from_linear(std::pow(10.0, db / 10.0)); }

double Power::db() const { return 10.0 * std::log10(linear_); }

CodingVector::CodingVector(std::vector<value_type> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("coding vector must be non-empty");
  if (std::all_of(entries_.begin(), entries_.end(), [](value_type v) { return v == 0; })) {
    throw std::invalid_argument("coding vector must be nonzero");
  }
}

std::int64_t CodingVector::squared_norm() const {
  std::int64_t s = 0;
  for (value_type v : entries_) s += v * v;
  return s;
}

CodingVector CodingVector::negated() const {
  std::vector<value_type> out(entries_.size());
  std::transform(entries_.begin(), entries_.end(), out.begin(), [](value_type v) { return -v; });
  return CodingVector(std::move(out));
}

bool CodingVector::same_up_to_sign(const CodingVector& other) const {
  if (other.size() != size()) return false;
  return *this == other || *this == other.negated();
}

std::string to_string(const CodingVector& a) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ',';
    os << a[i];
  }
  os << ']';
  return os.str();
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries, ChannelVector source, Power power)
    : entries_(std::move(entries)), source_(std::move(source)), power_(power) {}

GramMatrix gram_matrix(const ChannelVector& h, Power p) {
  const auto n = static_cast<Eigen::Index>(h.size());
  const double scale = p.linear() / (1.0 + p.linear() * h.squared_norm());
  Eigen::MatrixXd g(n, n);
  // Fill the upper triangle and mirror it so the result is exactly symmetric.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = (i == j ? 1.0 : 0.0) -
                       scale * h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)];
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return GramMatrix(std::move(g), h, p);
}

double beta_mmse(const ChannelVector& h, const CodingVector& a, Power p) {
  double dot = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) dot += h[i] * static_cast<double>(a[i]);
  return p.linear() * dot / (1.0 + p.linear() * h.squared_norm());
}

double quadratic_form(const Eigen::MatrixXd& g, std::span<const std::int64_t> a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[static_cast<std::size_t>(i)] == 0) continue;
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) row += g(i, j) * static_cast<double>(a[static_cast<std::size_t>(j)]);
    s += static_cast<double>(a[static_cast<std::size_t>(i)]) * row;
  }
  return s;
}

double quadratic_form(const GramMatrix& g, const CodingVector& a) {
  if (a.size() != g.size()) throw std::invalid_argument("coding vector length does not match Gram matrix");
  return quadratic_form(g.entries(), a.entries());
}

double rate_from_form(double form, RateUnits units) {
  if (!(form > kFormFloor)) {
    throw NumericError("non-positive quadratic form " + std::to_string(form));
  }
  return std::max(0.0, -0.5 * log_in(form, units));
}

double computation_rate(const GramMatrix& g, const CodingVector& a, RateUnits units) {
  return rate_from_form(quadratic_form(g, a), units);
}

double computation_rate(const ChannelVector& h, const CodingVector& a, Power p, RateUnits units) {
  return computation_rate(gram_matrix(h, p), a, units);
}

double computation_rate_with_beta(const ChannelVector& h, const CodingVector& a, Power p,
                                  double beta, RateUnits units) {
  double dist = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double d = beta * h[i] - static_cast<double>(a[i]);
    dist += d * d;
  }
  const double snr = p.linear() / (beta * beta + p.linear() * dist);
  return std::max(0.0, 0.5 * log_in(snr, units));
}

}  // namespace cfnc
