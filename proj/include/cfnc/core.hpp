#pragma once

// Domain types and closed-form computation-rate math for compute-and-forward
// relaying over real-valued AWGN channels.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfnc {

/// Raised when a quantity that must be strictly positive by construction
/// comes out non-positive (corrupted input or a numeric breakdown).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RateUnits { bits, nats };

const char* to_string(RateUnits units);
RateUnits parse_rate_units(const std::string& text);

/// Fading gains h_m seen by one relay, one entry per source.
class ChannelVector {
 public:
  ChannelVector() = default;
  explicit ChannelVector(std::vector<double> entries, int relay_index = 0);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const { return entries_; }
  int relay_index() const { return relay_index_; }

  double squared_norm() const;

 private:
  std::vector<double> entries_;
  int relay_index_ = 0;
};

/// Transmit power constraint, stored on the linear scale.
class Power {
 public:
  static Power from_linear(double linear);
  /// 10^(dB/10).
  static Power from_db(double db);

  double linear() const { return linear_; }
  double db() const;

 private:
  explicit Power(double linear) : linear_(linear) {}
  double linear_;
};

/// Nonzero integer network-coding coefficient vector a_m.
class CodingVector {
 public:
  using value_type = std::int64_t;

  CodingVector() = default;
  explicit CodingVector(std::vector<value_type> entries);
  CodingVector(std::initializer_list<value_type> entries)
      : CodingVector(std::vector<value_type>(entries)) {}

  std::size_t size() const { return entries_.size(); }
  value_type operator[](std::size_t i) const { return entries_[i]; }
  std::span<const value_type> entries() const { return entries_; }

  std::int64_t squared_norm() const;
  CodingVector negated() const;
  /// True when other == this or other == -this.
  bool same_up_to_sign(const CodingVector& other) const;

  friend bool operator==(const CodingVector&, const CodingVector&) = default;
  friend auto operator<=>(const CodingVector& a, const CodingVector& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<value_type> entries_;
};

std::string to_string(const CodingVector& a);

/// G = I - P/(1 + P|h|^2) h h^T.  Symmetric positive definite; a^T G a is the
/// effective-noise variance that the computation rate depends on.
class GramMatrix {
 public:
  GramMatrix(Eigen::MatrixXd entries, ChannelVector source, Power power);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const ChannelVector& source_channel() const { return source_; }
  Power power() const { return power_; }

 private:
  Eigen::MatrixXd entries_;
  ChannelVector source_;
  Power power_;
};

GramMatrix gram_matrix(const ChannelVector& h, Power p);

/// MMSE scaling P (h^T a) / (1 + P |h|^2).
double beta_mmse(const ChannelVector& h, const CodingVector& a, Power p);

/// a^T G a.
double quadratic_form(const GramMatrix& g, const CodingVector& a);
double quadratic_form(const Eigen::MatrixXd& g, std::span<const std::int64_t> a);

/// max(0, 1/2 log(1 / form)).  Throws NumericError if form is not positive.
double rate_from_form(double form, RateUnits units);

double computation_rate(const ChannelVector& h, const CodingVector& a, Power p,
                        RateUnits units = RateUnits::bits);
double computation_rate(const GramMatrix& g, const CodingVector& a,
                        RateUnits units = RateUnits::bits);

/// Rate achieved by an arbitrary scaling beta (before optimizing over beta):
/// max(0, 1/2 log(P / (beta^2 + P |beta h - a|^2))).
double computation_rate_with_beta(const ChannelVector& h, const CodingVector& a,
                                  Power p, double beta,
                                  RateUnits units = RateUnits::bits);

}  // namespace cfnc
