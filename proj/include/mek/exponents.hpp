#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mek/core.hpp"
#include "mek/gtable.hpp"
#include "mek/rd.hpp"

namespace mek {

// Axis meaning per kind: x is E in nats (RMofE, RBofE), a rate in nats
// (EMofR, EBofR) or the mixture weight (RdOfLambda); y is always nats.
enum class CurveKind { RMofE, RBofE, EMofR, EBofR, RdOfLambda };

struct CurvePoint {
  double x = 0.0;
  double y_nats = 0.0;
  std::optional<std::pair<double, double>> arg;  // achieving (mu, nu)
};

// One detected discontinuity, reported as the two samples bracketing it.
struct CurveJump {
  double x_low = 0.0;
  double x_high = 0.0;
  double y_low = 0.0;
  double y_high = 0.0;
};

struct Curve {
  CurveKind kind = CurveKind::RMofE;
  std::vector<CurvePoint> points;
  std::vector<CurveJump> jumps;
};

// Enforces strictly increasing x, monotone y for R-of-E and E-of-R kinds,
// and sampled convexity for EBofR. Throws DomainError.
void validate_curve(const Curve& curve);

// Value and achieving grid cell of one table readout.
struct GridReadout {
  InfoValue value;
  double mu = 0.0;
  double nu = 0.0;
  Eigen::Index i = 0;
  Eigen::Index j = 0;
};

// max over nu-ticks of min over mu-ticks of [-nu delta + mu E + g(i,j)].
// Ties break toward the smallest j, then the smallest i.
GridReadout marton_inverse(const GTable& table, double delta, double E);

// min over mu-ticks of max over nu-ticks of the same cells; never below
// marton_inverse on the same table.
GridReadout blahut_inverse(const GTable& table, double delta, double E);

Curve marton_inverse_curve(const GTable& table, double delta,
                           const Vec& e_ticks, int threads = 1);
Curve blahut_inverse_curve(const GTable& table, double delta,
                           const Vec& e_ticks, int threads = 1);

// min{x : y(x) >= r_query} on a monotone non-decreasing sampled curve, with
// linear interpolation inside a segment. Throws OutOfRange outside
// [first y, last y].
double inverse_to_exponent(const Curve& curve, double r_query);

// E_B(R) = max(0, max over mu-ticks > 0 of (R - h_i)/mu_i) with
// h_i = max_j (g(i,j) - nu_j delta). Throws OutOfRange unless
// 0 <= R <= h_0, the largest rate the grid can certify.
InfoValue blahut_exponent(const GTable& table, double delta, double r);
Curve blahut_exponent_curve(const GTable& table, double delta,
                            const Vec& r_ticks);

// Inverts a sampled R-of-E curve into an E-of-R curve on r_ticks: 0 below
// the first sampled rate, +infinity above the last. Consecutive E values
// further apart than jump_factor times the median finite step are reported
// as jumps in the metadata.
Curve exponent_from_inverse(const Curve& r_of_e, const Vec& r_ticks,
                            double jump_factor = 10.0);

// Rebuilds curve.jumps: marks consecutive finite y steps larger than
// jump_factor times the median positive step.
void detect_curve_jumps(Curve& curve, double jump_factor = 10.0);

// Exhaustive references over the type lattice {q : q(x) = k_x/resolution}
// (plus the exact center P), for alphabets up to size 4.
InfoValue brute_force_marton_inverse(const Distribution& P,
                                     const DistortionMatrix& d, double delta,
                                     double E, int resolution);
InfoValue brute_force_marton_exponent(const Distribution& P,
                                      const DistortionMatrix& d, double delta,
                                      double r, int resolution);

// Curve CSV (columns x,y_nats,y_bits,mu_opt,nu_opt): +infinity renders as
// empty y cells, absent argopt as empty mu/nu cells. x is written as
// x * x_scale, so rate/exponent axes can be emitted in bits while the curve
// itself stays in nats.
std::string curve_to_csv(const Curve& curve, double x_scale = 1.0);
Curve curve_from_csv(const std::vector<std::string>& lines, CurveKind kind,
                     double x_scale = 1.0);

}  // namespace mek
