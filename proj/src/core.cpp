#include "mek/core.hpp"

#include <optional>

namespace mek {

Distribution validate_distribution(const Vec& probs, double tol) {
  if (probs.size() == 0) throw DomainError("distribution is empty");
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double v = probs(i);
    if (!(v >= 0.0)) {
      throw NegativeEntry("negative or NaN probability at index " +
                          std::to_string(i));
    }
  }
  const double sum = probs.sum();
  if (std::abs(sum - 1.0) > tol) {
    throw SumOutOfTolerance("probabilities sum to " + std::to_string(sum));
  }
  Distribution out;
  out.probs = probs / sum;
  out.has_zero_mass = (probs.minCoeff() == 0.0);
  return out;
}

DistortionMatrix validate_distortion(const Mat& values) {
  if (values.rows() == 0 || values.cols() == 0) {
    throw DomainError("distortion matrix is empty");
  }
  for (Eigen::Index x = 0; x < values.rows(); ++x) {
    double row_min = kInf;
    for (Eigen::Index y = 0; y < values.cols(); ++y) {
      const double v = values(x, y);
      if (!std::isfinite(v) || v < 0.0) {
        throw NegativeEntry("distortion entry (" + std::to_string(x) + "," +
                            std::to_string(y) + ") is negative or non-finite");
      }
      row_min = std::min(row_min, v);
    }
    if (row_min != 0.0) {
      throw DomainError("distortion row " + std::to_string(x) +
                        " has no zero entry");
    }
  }
  DistortionMatrix out;
  out.values = values;
  return out;
}

InfoValue kl_divergence(const Distribution& q, const Distribution& p) {
  if (q.size() != p.size()) {
    throw AlphabetMismatch("kl_divergence: sizes " + std::to_string(q.size()) +
                           " vs " + std::to_string(p.size()));
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double qi = q(i);
    if (qi == 0.0) continue;
    if (p(i) == 0.0) return InfoValue(kInf);
    sum += qi * std::log(qi / p(i));
  }
  return InfoValue(std::max(sum, 0.0));
}

InfoValue binary_divergence(double lambda, double xi) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("binary_divergence: lambda outside [0,1]");
  }
  if (!(xi > 0.0 && xi < 1.0)) {
    throw DomainError("binary_divergence: xi outside (0,1)");
  }
  double sum = 0.0;
  if (lambda > 0.0) sum += lambda * std::log(lambda / xi);
  if (lambda < 1.0) sum += (1.0 - lambda) * std::log((1.0 - lambda) / (1.0 - xi));
  return InfoValue(std::max(sum, 0.0));
}

InfoValue binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("binary_entropy: t outside [0,1]");
  double sum = 0.0;
  if (t > 0.0) sum -= t * std::log(t);
  if (t < 1.0) sum -= (1.0 - t) * std::log(1.0 - t);
  return InfoValue(sum);
}

double delta_max(const Distribution& P, const DistortionMatrix& d) {
  if (P.size() != d.rows()) {
    throw AlphabetMismatch("delta_max: |P| = " + std::to_string(P.size()) +
                           " but distortion has " + std::to_string(d.rows()) +
                           " rows");
  }
  return (P.probs.transpose() * d.values).minCoeff();
}

}  // namespace mek
