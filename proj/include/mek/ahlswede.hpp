#pragma once

#include <vector>

#include "mek/core.hpp"
#include "mek/exponents.hpp"

namespace mek {

// The (delta, a) pair that balances the two block-uniform rates:
//   delta = [ln mA - ln mB + ln(mB - 1)] / [ln(mA - 1) + ln(mB - 1)],
//   a     = delta / (1 - delta).
// Equal block sizes collapse to (0.5, 1).
struct AhlswedeParams {
  double delta = 0.0;
  double a = 0.0;
};
AhlswedeParams solve_params(int size_a, int size_b);

// Two-block counterexample family: distortion 0 on the diagonal, 1
// off-diagonal within the first block, `a` within the second, `b` across
// blocks; the source is the mixture Q_xi = xi Q_A + (1 - xi) Q_B of the
// per-block uniform distributions.
struct AhlswedeInstance {
  int size_a = 0;
  int size_b = 0;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;
  double xi = 0.0;
  DistortionMatrix d;

  Distribution source() const;  // Q_xi
};

AhlswedeInstance build_instance(int size_a, int size_b, double xi,
                                double b = 10.0);

// lambda spread uniformly over the first block, 1 - lambda over the second.
Distribution q_lambda(const AhlswedeInstance& inst, double lambda);

// Indices of interior local maxima: points strictly above both neighbors,
// with a flat run counting once at its left edge.
std::vector<size_t> local_maxima(const Curve& curve);

// rd_lambda_sweep output: the sampled curve plus the two leading maxima.
struct SweepReport {
  Curve curve;  // RdOfLambda: x = lambda, y = R(delta | Q_lambda) in nats
  double lambda_star = 0.0;  // global maximizer
  double r_star_nats = 0.0;
  double lambda_1 = 0.0;  // best local maximizer besides the global one
  double r_1_nats = 0.0;
  bool bimodal = false;  // at least two interior local maxima
};

SweepReport rd_lambda_sweep(const AhlswedeInstance& inst, int n_lambda,
                            int threads = 1);

// Exact exponent curve for the mixture family: pairs (R(delta | Q_lambda),
// D_2(lambda || xi)) over a lambda grid plus the exact (R(delta | Q_xi), 0)
// point, sorted by rate, suffix-minimized in the divergence, anchored at
// (0, 0). Jumps in the result are flagged in the curve metadata.
Curve marton_exact(const AhlswedeInstance& inst, int n_lambda,
                   int threads = 1);
Curve marton_exact_from_sweep(const AhlswedeInstance& inst,
                              const Curve& sweep);

// The lambda past the valley where the sweep re-crosses the level of its
// secondary maximum, located by bisection between the valley and the global
// maximizer. Throws NotBimodal when the sweep has fewer than two interior
// local maxima.
double lambda2_crossing(const AhlswedeInstance& inst, const Curve& sweep);

}  // namespace mek
