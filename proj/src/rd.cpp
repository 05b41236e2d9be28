#include "mek/rd.hpp"

namespace mek {

namespace {

constexpr double kMassFloor = 1e-300;

struct SlopeState {
  Vec p;        // current reproduction distribution
  Vec A;        // channel forward image, A(x) = sum_y p(y) e^{-nu d}
  double F = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Runs the alternating minimization for fixed nu starting from `p0`.
SlopeState minimize_objective(const Distribution& q_x, const Channel& ch,
                              const RdOptions& opt, const Vec& p0) {
  const Eigen::Index ny = ch.cols();
  SlopeState st;
  st.p = p0;
  Vec w(ch.rows()), s(ny);
  double prev = kInf;
  for (int it = 1; it <= opt.max_itr; ++it) {
    ch.forward(st.p, st.A);
    double F = 0.0;
    for (Eigen::Index x = 0; x < q_x.size(); ++x) {
      if (q_x(x) > 0.0) F -= q_x(x) * std::log(st.A(x));
    }
    st.F = F;
    st.iterations = it;
    if (std::abs(prev - F) < opt.eps) {
      st.converged = true;
      return st;
    }
    prev = F;
    for (Eigen::Index x = 0; x < q_x.size(); ++x) {
      w(x) = q_x(x) > 0.0 ? q_x(x) / st.A(x) : 0.0;
    }
    ch.backward(w, s);
    st.p = st.p.cwiseProduct(s).cwiseMax(kMassFloor);
    st.p /= st.p.sum();
  }
  return st;
}

double induced_distortion(const Distribution& q_x, const Channel& ch,
                          const SlopeState& st) {
  Vec t(ch.rows());
  ch.forward_weighted(st.p, t);
  double dist = 0.0;
  for (Eigen::Index x = 0; x < q_x.size(); ++x) {
    if (q_x(x) > 0.0) dist += q_x(x) * t(x) / st.A(x);
  }
  return dist;
}

// Same iteration on the two block masses of a block-uniform source; exact
// because every update preserves uniformity within blocks.
struct CollapsedState {
  Eigen::Vector2d mass;
  Eigen::Vector2d A;
  double F = 0.0;
  int iterations = 0;
  bool converged = false;
};

CollapsedState minimize_collapsed(const Eigen::Vector2d& q2,
                                  const CollapsedTwoBlock& cw,
                                  const RdOptions& opt,
                                  const Eigen::Vector2d& m0) {
  CollapsedState st;
  st.mass = m0;
  double prev = kInf;
  for (int it = 1; it <= opt.max_itr; ++it) {
    st.A = cw.w * st.mass;
    double F = 0.0;
    for (int k = 0; k < 2; ++k) {
      if (q2(k) > 0.0) F -= q2(k) * std::log(st.A(k));
    }
    st.F = F;
    st.iterations = it;
    if (std::abs(prev - F) < opt.eps) {
      st.converged = true;
      return st;
    }
    prev = F;
    Eigen::Vector2d w;
    for (int k = 0; k < 2; ++k) {
      w(k) = q2(k) > 0.0 ? q2(k) / st.A(k) : 0.0;
    }
    const Eigen::Vector2d s = cw.w * w;  // the kernel is symmetric
    st.mass = st.mass.cwiseProduct(s).cwiseMax(kMassFloor);
    st.mass /= st.mass.sum();
  }
  return st;
}

double collapsed_distortion(const Eigen::Vector2d& q2,
                            const CollapsedTwoBlock& cw,
                            const CollapsedState& st) {
  const Eigen::Vector2d t = cw.wd * st.mass;
  double dist = 0.0;
  for (int k = 0; k < 2; ++k) {
    if (q2(k) > 0.0) dist += q2(k) * t(k) / st.A(k);
  }
  return dist;
}

void check_dims(const Distribution& q_x, const DistortionMatrix& d) {
  if (q_x.size() != d.rows()) {
    throw AlphabetMismatch("source size " + std::to_string(q_x.size()) +
                           " vs distortion rows " + std::to_string(d.rows()));
  }
}

std::optional<Eigen::Vector2d> collapse_source(const Distribution& q_x,
                                               const DistortionMatrix& d) {
  if (!d.two_block) return std::nullopt;
  return block_masses(*d.two_block, q_x.probs);
}

}  // namespace

RdPoint rd_fixed_slope(const Distribution& q_x, const DistortionMatrix& d,
                       double nu, const RdOptions& opt) {
  check_dims(q_x, d);
  if (nu < 0.0) throw DomainError("rd_fixed_slope: negative slope");
  RdPoint out;
  out.slope = nu;
  if (auto q2 = collapse_source(q_x, d)) {
    const auto cw = collapse_two_block(*d.two_block, nu);
    const double ny = static_cast<double>(cw.na + cw.nb);
    const Eigen::Vector2d m0(cw.na / ny, cw.nb / ny);
    CollapsedState st = minimize_collapsed(*q2, cw, opt, m0);
    out.objective = st.F;
    out.distortion = collapsed_distortion(*q2, cw, st);
    out.p_y = Distribution{expand_block_masses(*d.two_block, st.mass), false};
    out.iterations = st.iterations;
    out.converged = st.converged;
  } else {
    auto ch = make_channel(d, nu);
    Vec p0 = Vec::Constant(ch->cols(), 1.0 / static_cast<double>(ch->cols()));
    SlopeState st = minimize_objective(q_x, *ch, opt, p0);
    out.objective = st.F;
    out.distortion = induced_distortion(q_x, *ch, st);
    out.p_y = Distribution{std::move(st.p), false};
    out.iterations = st.iterations;
    out.converged = st.converged;
  }
  out.rate = InfoValue(std::max(out.objective - nu * out.distortion, 0.0));
  return out;
}

RdResult rate_distortion(const Distribution& q_x, const DistortionMatrix& d,
                         double delta, const RdOptions& opt) {
  check_dims(q_x, d);
  if (delta < 0.0) throw DomainError("rate_distortion: negative delta");
  RdResult out;
  if (delta >= delta_max(q_x, d)) {
    out.rate = InfoValue(0.0);
    out.nu_star = 0.0;
    out.point = rd_fixed_slope(q_x, d, 0.0, opt);
    return out;
  }

  const std::optional<Eigen::Vector2d> q2 = collapse_source(q_x, d);

  // `p` is the warm-start state: block masses in collapsed mode, a full
  // reproduction distribution otherwise.
  struct EvalOut {
    double F = 0.0;
    double dist = 0.0;
    int iterations = 0;
    bool converged = false;
    Vec p;
  };
  auto eval = [&](double nu, const Vec& p0) {
    EvalOut o;
    if (q2) {
      const auto cw = collapse_two_block(*d.two_block, nu);
      CollapsedState st =
          minimize_collapsed(*q2, cw, opt, Eigen::Vector2d(p0(0), p0(1)));
      o.F = st.F;
      o.dist = collapsed_distortion(*q2, cw, st);
      o.iterations = st.iterations;
      o.converged = st.converged;
      o.p = st.mass;
    } else {
      auto ch = make_channel(d, nu);
      SlopeState st = minimize_objective(q_x, *ch, opt, p0);
      o.F = st.F;
      o.dist = induced_distortion(q_x, *ch, st);
      o.iterations = st.iterations;
      o.converged = st.converged;
      o.p = std::move(st.p);
    }
    return o;
  };

  Vec warm;
  if (q2) {
    const double ny = static_cast<double>(q_x.size());
    warm = Vec(2);
    warm << d.two_block->size_a / ny, d.two_block->size_b / ny;
  } else {
    warm = Vec::Constant(d.cols(), 1.0 / static_cast<double>(d.cols()));
  }

  // Bracket: double the slope until the induced distortion is feasible.
  // The half-tolerance slack makes delta = 0 reachable.
  const double target = delta + 0.5 * opt.tol_delta;
  double lo = 0.0, hi = 1.0;
  EvalOut best = eval(hi, warm);
  warm = best.p;
  int doublings = 0;
  while (best.dist > target) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) {
      throw DomainError("rate_distortion: slope bracket overflow");
    }
    best = eval(hi, warm);
    warm = best.p;
  }

  double best_nu = hi;
  bool all_converged = best.converged;
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    EvalOut cand = eval(mid, warm);
    warm = cand.p;
    all_converged = all_converged && cand.converged;
    if (std::abs(cand.dist - delta) <= opt.tol_delta) {
      best = std::move(cand);
      best_nu = mid;
      break;
    }
    if (cand.dist > delta) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(cand);
      best_nu = mid;
    }
  }

  out.nu_star = best_nu;
  out.rate = InfoValue(std::max(best.F - best_nu * delta, 0.0));
  out.point.slope = best_nu;
  out.point.objective = best.F;
  out.point.distortion = best.dist;
  out.point.rate = out.rate;
  out.point.p_y =
      q2 ? Distribution{expand_block_masses(*d.two_block,
                                            Eigen::Vector2d(best.p(0),
                                                            best.p(1))),
                        false}
         : Distribution{std::move(best.p), false};
  out.point.iterations = best.iterations;
  out.point.converged = all_converged;
  return out;
}

InfoValue rd_uniform_closed_form(int m, double delta, double scale) {
  if (m < 2) throw DomainError("rd_uniform_closed_form: m < 2");
  if (scale <= 0.0) throw DomainError("rd_uniform_closed_form: scale <= 0");
  const double t = delta / scale;
  if (t < 0.0) throw DomainError("rd_uniform_closed_form: negative delta");
  const double m_real = static_cast<double>(m);
  if (t >= (m_real - 1.0) / m_real) return InfoValue(0.0);
  const double r =
      std::log(m_real) - binary_entropy(t).nats - t * std::log(m_real - 1.0);
  return InfoValue(std::max(r, 0.0));
}

}  // namespace mek
