#pragma once

#include <memory>

#include "mek/core.hpp"

namespace mek {

// Matrix-free access to B = exp(-nu * d) and to its distortion-weighted
// companion (B .* d). The alternating-minimization loops only ever touch B
// through these three products, so structured distortion matrices can plug
// in cheaper kernels without changing any solver code.
class Channel {
 public:
  virtual ~Channel() = default;

  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  // A = B p, size |X|.
  virtual void forward(const Vec& p, Vec& out) const = 0;
  // s = B^T w, size |Y|.
  virtual void backward(const Vec& w, Vec& out) const = 0;
  // T = (B .* d) p, size |X|; used for expected-distortion readouts.
  virtual void forward_weighted(const Vec& p, Vec& out) const = 0;
};

// Dense kernel: materializes B and B .* d once per slope value.
class DenseChannel final : public Channel {
 public:
  DenseChannel(const DistortionMatrix& d, double nu);

  Eigen::Index rows() const override { return B_.rows(); }
  Eigen::Index cols() const override { return B_.cols(); }
  void forward(const Vec& p, Vec& out) const override;
  void backward(const Vec& w, Vec& out) const override;
  void forward_weighted(const Vec& p, Vec& out) const override;

 private:
  Mat B_;
  Mat Bd_;
};

// Two-block kernel. With blocks A (size m_A, off-diagonal distortion 1),
// B (size m_B, off-diagonal distortion a) and cross-block distortion b,
// each product collapses to per-block sums:
//   (Bp)(x in A) = p(x) (1 - e^{-nu}) + e^{-nu} S_A + e^{-nu b} S_B
// and symmetrically for the second block. Exact for arbitrary p, O(|X|).
class TwoBlockChannel final : public Channel {
 public:
  TwoBlockChannel(const TwoBlockShape& shape, double nu);

  Eigen::Index rows() const override { return na_ + nb_; }
  Eigen::Index cols() const override { return na_ + nb_; }
  void forward(const Vec& p, Vec& out) const override;
  void backward(const Vec& w, Vec& out) const override;
  void forward_weighted(const Vec& p, Vec& out) const override;

 private:
  Eigen::Index na_;
  Eigen::Index nb_;
  double a_;
  double b_;
  double ka_;  // e^{-nu}
  double kb_;  // e^{-nu a}
  double kx_;  // e^{-nu b}
};

// Picks the structured kernel when the matrix carries two-block metadata.
std::unique_ptr<Channel> make_channel(const DistortionMatrix& d, double nu);

// Block-level collapse of the two-block kernel. A distribution that is
// uniform inside each block keeps that shape under every solver update, so
// the |X|-dimensional iteration reduces exactly to the two block masses:
//   forward image (block-constant) = w  * (mass_A, mass_B)
//   distortion-weighted image      = wd * (mass_A, mass_B)
struct CollapsedTwoBlock {
  Eigen::Index na = 0;
  Eigen::Index nb = 0;
  Eigen::Matrix2d w;
  Eigen::Matrix2d wd;
};
CollapsedTwoBlock collapse_two_block(const TwoBlockShape& shape, double nu);

// Block masses (sum over each block) if v is exactly uniform within both
// blocks, nothing otherwise.
std::optional<Eigen::Vector2d> block_masses(const TwoBlockShape& shape,
                                            const Vec& v);

// Expands block masses back to the full uniform-within-blocks vector.
Vec expand_block_masses(const TwoBlockShape& shape,
                        const Eigen::Vector2d& mass);

}  // namespace mek
