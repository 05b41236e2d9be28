#include "mek/channel.hpp"

namespace mek {

DenseChannel::DenseChannel(const DistortionMatrix& d, double nu) {
  B_ = (-nu * d.values.array()).exp();
  Bd_ = B_.array() * d.values.array();
}

void DenseChannel::forward(const Vec& p, Vec& out) const { out.noalias() = B_ * p; }

void DenseChannel::backward(const Vec& w, Vec& out) const {
  out.noalias() = B_.transpose() * w;
}

void DenseChannel::forward_weighted(const Vec& p, Vec& out) const {
  out.noalias() = Bd_ * p;
}

TwoBlockChannel::TwoBlockChannel(const TwoBlockShape& shape, double nu)
    : na_(shape.size_a),
      nb_(shape.size_b),
      a_(shape.a),
      b_(shape.b),
      ka_(std::exp(-nu)),
      kb_(std::exp(-nu * shape.a)),
      kx_(std::exp(-nu * shape.b)) {}

void TwoBlockChannel::forward(const Vec& p, Vec& out) const {
  const double sa = p.head(na_).sum();
  const double sb = p.tail(nb_).sum();
  out.resize(na_ + nb_);
  out.head(na_) = (1.0 - ka_) * p.head(na_).array() + (ka_ * sa + kx_ * sb);
  out.tail(nb_) = (1.0 - kb_) * p.tail(nb_).array() + (kb_ * sb + kx_ * sa);
}

void TwoBlockChannel::backward(const Vec& w, Vec& out) const {
  // The two-block matrix is symmetric, so B^T w = B w.
  forward(w, out);
}

void TwoBlockChannel::forward_weighted(const Vec& p, Vec& out) const {
  const double sa = p.head(na_).sum();
  const double sb = p.tail(nb_).sum();
  out.resize(na_ + nb_);
  // Diagonal entries carry distortion 0 and drop out.
  out.head(na_) = -ka_ * p.head(na_).array() + (ka_ * sa + b_ * kx_ * sb);
  out.tail(nb_) =
      -a_ * kb_ * p.tail(nb_).array() + (a_ * kb_ * sb + b_ * kx_ * sa);
}

std::unique_ptr<Channel> make_channel(const DistortionMatrix& d, double nu) {
  if (d.two_block) return std::make_unique<TwoBlockChannel>(*d.two_block, nu);
  return std::make_unique<DenseChannel>(d, nu);
}

CollapsedTwoBlock collapse_two_block(const TwoBlockShape& shape, double nu) {
  const double na = static_cast<double>(shape.size_a);
  const double nb = static_cast<double>(shape.size_b);
  const double ka = std::exp(-nu);
  const double kb = std::exp(-nu * shape.a);
  const double kx = std::exp(-nu * shape.b);
  CollapsedTwoBlock c;
  c.na = shape.size_a;
  c.nb = shape.size_b;
  c.w << (1.0 - ka) / na + ka, kx,
         kx, (1.0 - kb) / nb + kb;
  c.wd << ka * (na - 1.0) / na, shape.b * kx,
          shape.b * kx, shape.a * kb * (nb - 1.0) / nb;
  return c;
}

std::optional<Eigen::Vector2d> block_masses(const TwoBlockShape& shape,
                                            const Vec& v) {
  const Eigen::Index na = shape.size_a;
  const Eigen::Index nb = shape.size_b;
  if (v.size() != na + nb) return std::nullopt;
  for (Eigen::Index i = 1; i < na; ++i) {
    if (v(i) != v(0)) return std::nullopt;
  }
  for (Eigen::Index i = na + 1; i < na + nb; ++i) {
    if (v(i) != v(na)) return std::nullopt;
  }
  return Eigen::Vector2d(v(0) * static_cast<double>(na),
                         v(na) * static_cast<double>(nb));
}

Vec expand_block_masses(const TwoBlockShape& shape,
                        const Eigen::Vector2d& mass) {
  Vec v(shape.size_a + shape.size_b);
  v.head(shape.size_a).setConstant(mass(0) / static_cast<double>(shape.size_a));
  v.tail(shape.size_b).setConstant(mass(1) / static_cast<double>(shape.size_b));
  return v;
}

}  // namespace mek
