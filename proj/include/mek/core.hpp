#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace mek {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.6931471805599453;

// Error hierarchy. Every failure mode raised by the library derives from
// Error so callers can catch one type at the boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeEntry : Error {
  using Error::Error;
};
struct SumOutOfTolerance : Error {
  using Error::Error;
};
struct AlphabetMismatch : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct NotBimodal : Error {
  using Error::Error;
};
struct AlphabetTooLarge : Error {
  using Error::Error;
};
struct Infeasible : Error {
  using Error::Error;
};
struct Unbounded : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// An information quantity stored in nats. Bits are a view, never a second
// storage unit, so the two can not drift apart.
struct InfoValue {
  double nats = 0.0;

  InfoValue() = default;
  explicit InfoValue(double n) : nats(n) {}
  double bits() const { return nats / kLn2; }
  static InfoValue from_bits(double b) { return InfoValue(b * kLn2); }
};

// A point on a finite probability simplex. `has_zero_mass` flags symbols
// with exactly zero probability; they stay in the alphabet so indices keep
// lining up with distortion matrix rows and columns.
struct Distribution {
  Vec probs;
  bool has_zero_mass = false;

  Eigen::Index size() const { return probs.size(); }
  double operator()(Eigen::Index i) const { return probs(i); }
};

// Nonnegative |X| x |Y| distortion values. Every row must contain a zero
// (each source symbol has a distortion-free reproduction). `two_block`,
// when set, records that the matrix has the two-block structure
//   d(x,y) = 0 on the diagonal, 1 within the first block, `a` within the
//   second block, `b` across blocks,
// which lets the matrix-free kernels run in O(|X|) instead of O(|X||Y|).
struct TwoBlockShape {
  Eigen::Index size_a = 0;
  Eigen::Index size_b = 0;
  double a = 0.0;
  double b = 0.0;
};

struct DistortionMatrix {
  Mat values;
  std::optional<TwoBlockShape> two_block;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  double d_max() const { return values.maxCoeff(); }
};

// Validates entries and builds a Distribution, renormalizing when the sum
// is within `tol` of 1.
Distribution validate_distribution(const Vec& probs, double tol = 1e-9);

// Validates entries and the per-row-zero condition.
DistortionMatrix validate_distortion(const Mat& values);

// Relative entropy D(q || p) in nats, with 0 ln 0 = 0. Mass of q outside
// the support of p yields +infinity rather than an error so feasibility
// filters can compare against finite thresholds.
InfoValue kl_divergence(const Distribution& q, const Distribution& p);

// D_2(lambda || xi), the divergence between Bernoulli parameters.
InfoValue binary_divergence(double lambda, double xi);

// -t ln t - (1-t) ln(1-t), zero at both endpoints.
InfoValue binary_entropy(double t);

// min over y of sum_x P(x) d(x,y): the distortion above which the
// rate-distortion function is identically zero.
double delta_max(const Distribution& P, const DistortionMatrix& d);

// log sum_i exp(v_i), evaluated stably by factoring out the maximum.
template <typename Derived>
double log_sum_exp(const Eigen::MatrixBase<Derived>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace mek
