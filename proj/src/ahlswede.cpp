#include "mek/ahlswede.hpp"

#include <algorithm>
#include <cmath>

#include "mek/parallel.hpp"
#include "mek/rd.hpp"

namespace mek {

AhlswedeParams solve_params(int size_a, int size_b) {
  if (size_a < 2 || size_b < 2) {
    throw DomainError("solve_params: block sizes must be at least 2");
  }
  if (size_a == size_b) return AhlswedeParams{0.5, 1.0};
  const double la = std::log(static_cast<double>(size_a));
  const double lb = std::log(static_cast<double>(size_b));
  const double la1 = std::log(static_cast<double>(size_a - 1));
  const double lb1 = std::log(static_cast<double>(size_b - 1));
  AhlswedeParams out;
  out.delta = (la - lb + lb1) / (la1 + lb1);
  out.a = out.delta / (1.0 - out.delta);
  return out;
}

Distribution AhlswedeInstance::source() const { return q_lambda(*this, xi); }

AhlswedeInstance build_instance(int size_a, int size_b, double xi, double b) {
  const AhlswedeParams params = solve_params(size_a, size_b);
  if (!(xi > 0.0 && xi < 1.0)) {
    throw DomainError("build_instance: xi must lie strictly inside (0,1)");
  }
  if (!(params.a > 0.0 && params.a < 1.0)) {
    throw DomainError(
        "build_instance: solved within-block distortion falls outside (0,1); "
        "the first block must be smaller than the second");
  }
  if (!(b > std::max(1.0, params.a))) {
    throw DomainError("build_instance: cross-block penalty too small");
  }

  AhlswedeInstance inst;
  inst.size_a = size_a;
  inst.size_b = size_b;
  inst.a = params.a;
  inst.b = b;
  inst.delta = params.delta;
  inst.xi = xi;

  const Eigen::Index n = size_a + size_b;
  Mat d = Mat::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (x == y) continue;
      const bool xa = x < size_a;
      const bool ya = y < size_a;
      d(x, y) = xa == ya ? (xa ? 1.0 : params.a) : b;
    }
  }
  inst.d = validate_distortion(d);
  inst.d.two_block = TwoBlockShape{size_a, size_b, params.a, b};
  return inst;
}

Distribution q_lambda(const AhlswedeInstance& inst, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("q_lambda: lambda must lie in [0,1]");
  }
  Vec p(inst.size_a + inst.size_b);
  p.head(inst.size_a).setConstant(lambda / inst.size_a);
  p.tail(inst.size_b).setConstant((1.0 - lambda) / inst.size_b);
  return Distribution{std::move(p), lambda == 0.0 || lambda == 1.0};
}

std::vector<size_t> local_maxima(const Curve& curve) {
  const auto& pts = curve.points;
  std::vector<size_t> out;
  const size_t n = pts.size();
  size_t k = 1;
  while (k + 1 < n) {
    if (pts[k].y_nats > pts[k - 1].y_nats) {
      size_t m = k;
      while (m + 1 < n && pts[m + 1].y_nats == pts[k].y_nats) ++m;
      if (m + 1 < n && pts[m + 1].y_nats < pts[k].y_nats) out.push_back(k);
      k = m + 1;
    } else {
      ++k;
    }
  }
  return out;
}

SweepReport rd_lambda_sweep(const AhlswedeInstance& inst, int n_lambda,
                            int threads) {
  if (n_lambda < 3) throw DomainError("rd_lambda_sweep: need n_lambda >= 3");
  const Vec lambdas = linspace(0.0, 1.0, n_lambda);

  SweepReport report;
  report.curve.kind = CurveKind::RdOfLambda;
  report.curve.points.resize(static_cast<size_t>(n_lambda));
  parallel_for(n_lambda, threads, [&](int k) {
    const double lam = lambdas(k);
    const double r = rate_distortion(q_lambda(inst, lam), inst.d, inst.delta)
                         .rate.nats;
    report.curve.points[static_cast<size_t>(k)] =
        CurvePoint{lam, r, std::nullopt};
  });

  size_t best = 0;
  for (size_t k = 1; k < report.curve.points.size(); ++k) {
    if (report.curve.points[k].y_nats > report.curve.points[best].y_nats) {
      best = k;
    }
  }
  report.lambda_star = report.curve.points[best].x;
  report.r_star_nats = report.curve.points[best].y_nats;

  const std::vector<size_t> maxima = local_maxima(report.curve);
  report.bimodal = maxima.size() >= 2;
  double second = -kInf;
  for (size_t idx : maxima) {
    if (idx == best) continue;
    if (report.curve.points[idx].y_nats > second) {
      second = report.curve.points[idx].y_nats;
      report.lambda_1 = report.curve.points[idx].x;
      report.r_1_nats = second;
    }
  }
  return report;
}

Curve marton_exact_from_sweep(const AhlswedeInstance& inst,
                              const Curve& sweep) {
  std::vector<std::pair<double, double>> pairs;  // (rate, divergence)
  pairs.reserve(sweep.points.size() + 2);
  for (const CurvePoint& pt : sweep.points) {
    pairs.emplace_back(pt.y_nats, binary_divergence(pt.x, inst.xi).nats);
  }
  const double r_xi =
      rate_distortion(inst.source(), inst.d, inst.delta).rate.nats;
  pairs.emplace_back(r_xi, 0.0);

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  for (size_t k = pairs.size() - 1; k-- > 0;) {
    pairs[k].second = std::min(pairs[k].second, pairs[k + 1].second);
  }

  Curve curve;
  curve.kind = CurveKind::EMofR;
  if (pairs.front().first > 0.0) {
    curve.points.push_back(CurvePoint{0.0, 0.0, std::nullopt});
  }
  for (const auto& [r, e] : pairs) {
    if (!curve.points.empty() && !(r > curve.points.back().x)) continue;
    curve.points.push_back(CurvePoint{r, e, std::nullopt});
  }
  validate_curve(curve);
  detect_curve_jumps(curve);
  return curve;
}

Curve marton_exact(const AhlswedeInstance& inst, int n_lambda, int threads) {
  if (n_lambda < 3) throw DomainError("marton_exact: need n_lambda >= 3");
  const SweepReport report = rd_lambda_sweep(inst, n_lambda, threads);
  return marton_exact_from_sweep(inst, report.curve);
}

double lambda2_crossing(const AhlswedeInstance& inst, const Curve& sweep) {
  const auto& pts = sweep.points;
  const std::vector<size_t> maxima = local_maxima(sweep);
  if (maxima.size() < 2) {
    throw NotBimodal("lambda2_crossing: sweep has fewer than two local maxima");
  }

  size_t best = 0;
  for (size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].y_nats > pts[best].y_nats) best = k;
  }
  size_t second = maxima[0] == best ? maxima[1] : maxima[0];
  for (size_t idx : maxima) {
    if (idx != best && pts[idx].y_nats > pts[second].y_nats) second = idx;
  }
  const double target = pts[second].y_nats;

  const size_t lo_idx = std::min(second, best);
  const size_t hi_idx = std::max(second, best);
  size_t valley = lo_idx;
  for (size_t k = lo_idx; k <= hi_idx; ++k) {
    if (pts[k].y_nats < pts[valley].y_nats) valley = k;
  }

  const auto rate_at = [&](double lam) {
    return rate_distortion(q_lambda(inst, lam), inst.d, inst.delta).rate.nats;
  };
  double neg = pts[valley].x;   // R below the target level
  double pos = pts[best].x;     // R above it
  for (int it = 0; it < 200 && std::abs(pos - neg) > 1e-10; ++it) {
    const double mid = 0.5 * (neg + pos);
    (rate_at(mid) < target ? neg : pos) = mid;
  }
  return 0.5 * (neg + pos);
}

}  // namespace mek
