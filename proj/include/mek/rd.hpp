#pragma once

#include "mek/channel.hpp"
#include "mek/core.hpp"

namespace mek {

// One point of the parametric rate-distortion trade-off at slope `nu`:
//   F(nu)   = min over p_Y of -sum_x q(x) ln sum_y p(y) e^{-nu d(x,y)}
//   rate    = F(nu) - nu * distortion
// together with the inner optimizer and convergence bookkeeping.
struct RdPoint {
  double slope = 0.0;
  double distortion = 0.0;
  InfoValue rate;
  double objective = 0.0;  // F(nu) in nats
  Distribution p_y;
  int iterations = 0;
  bool converged = true;
};

struct RdOptions {
  double eps = 1e-10;      // stop when the objective change drops below this
  int max_itr = 20000;
  double tol_delta = 1e-6;  // distortion tolerance of the slope search
};

// Alternating minimization of F(nu) for a fixed slope. The objective is
// non-increasing across iterations; if max_itr is hit first, the last
// iterate is returned with converged = false.
RdPoint rd_fixed_slope(const Distribution& q_x, const DistortionMatrix& d,
                       double nu, const RdOptions& opt = {});

// Rate-distortion function R(delta | q_x) in nats, via bisection on the
// monotone map nu -> distortion(nu). Also returns the final slope. The
// returned rate is evaluated as F(nu) - nu * delta, which is a valid lower
// bound for every nu and tight at the bracketed optimum.
struct RdResult {
  InfoValue rate;
  double nu_star = 0.0;
  RdPoint point;
};
RdResult rate_distortion(const Distribution& q_x, const DistortionMatrix& d,
                         double delta, const RdOptions& opt = {});

// Closed form for a uniform source of size m whose off-diagonal distortion
// is `scale`: ln m - h(delta/scale) - (delta/scale) ln(m-1), clamped at 0.
InfoValue rd_uniform_closed_form(int m, double delta, double scale);

}  // namespace mek
