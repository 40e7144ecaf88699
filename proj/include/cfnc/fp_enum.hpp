#pragma once

// Fincke-Pohst candidate-set search: list every nonzero integer vector inside
// the ellipsoid t^T G t <= C and keep the T_max with the highest rates.

#include "cfnc/core.hpp"

#include <optional>
#include <vector>

namespace cfnc {

class CholeskyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when radius doubling is exhausted before T_max vectors are found.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// G = U^T U rewritten as t^T G t = sum_i diag[i] (t_i + sum_{j>i} upper(i,j) t_j)^2
/// with diag[i] = u_ii^2 and upper(i,j) = u_ij / u_ii.
struct CholeskyFactors {
  std::vector<double> diag;
  Eigen::MatrixXd upper;  // strictly upper triangular; lower part and diagonal are zero

  std::size_t size() const { return diag.size(); }
  /// Evaluates the form through the factored sum.
  double evaluate(std::span<const std::int64_t> t) const;
};

CholeskyFactors cholesky(const Eigen::MatrixXd& g);
inline CholeskyFactors cholesky(const GramMatrix& g) { return cholesky(g.entries()); }

/// Squared radius from the sign-quantized minimum-eigenvalue eigenvector.
/// The eigenvector is canonicalized so its first nonzero entry is positive and
/// entries with |v_i| < 1e-12 count as zero; sign(0) is taken as +1.
double initial_radius(const Eigen::MatrixXd& g);
inline double initial_radius(const GramMatrix& g) { return initial_radius(g.entries()); }

/// The +-1 vector whose form is initial_radius(g).
std::vector<std::int64_t> quantized_min_eigenvector(const Eigen::MatrixXd& g);

/// Snapshot of the depth-first search.  Level indices are zero-based: level
/// n-1 is the outermost coordinate, level 0 the last to be fixed.
struct EnumerationState {
  std::size_t level = 0;
  std::vector<double> offset;          // Delta_k
  std::vector<double> residual;        // C_k
  std::vector<std::int64_t> lower;     // LB_k
  std::vector<std::int64_t> upper;     // UB_k
  std::vector<std::int64_t> point;     // t_k (valid for levels >= level)
};

/// Step-wise Fincke-Pohst walk.  Yields one representative of every +-pair
/// of nonzero integer points with t^T G t <= radius; the walk stops at the
/// zero vector, which is reached after exactly one member of each pair.
class FinckePohstEnumerator {
 public:
  FinckePohstEnumerator(const CholeskyFactors& factors, double radius);

  /// Next point, or nullopt once the search is finished.
  std::optional<CodingVector> next();
  const EnumerationState& state() const { return state_; }

 private:
  void set_bounds(std::size_t k);

  const CholeskyFactors& factors_;
  double radius_;
  EnumerationState state_;
  bool done_ = false;
  bool need_bounds_ = true;
};

std::vector<CodingVector> enumerate_ellipsoid(const CholeskyFactors& factors, double radius);

struct CandidateTable {
  int relay_index = 0;
  std::vector<CodingVector> vectors;
  std::vector<double> rates;  // descending, rates[i] belongs to vectors[i]
  RateUnits units = RateUnits::bits;

  std::size_t size() const { return vectors.size(); }
};

struct CandidateSearchOptions {
  int max_doublings = 30;
};

/// Top-T_max vectors by computation rate for one relay.  Ties in rate are
/// broken by lexicographic order of the entries.
CandidateTable candidate_set(const ChannelVector& h, Power p, std::size_t t_max,
                             RateUnits units = RateUnits::bits,
                             const CandidateSearchOptions& options = {});

}  // namespace cfnc
