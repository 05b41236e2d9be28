#include "mek/exponents.hpp"

#include <algorithm>

#include "mek/csv.hpp"
#include "mek/parallel.hpp"

namespace mek {

namespace {

void check_query(double delta, double E) {
  // delta = 0 is rejected: the sup over nu need not be attained at finite
  // nu there, so a capped nu grid has no approximation guarantee.
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("grid readout: delta must be positive");
  }
  if (E < 0.0 || !std::isfinite(E)) {
    throw DomainError("grid readout: bad E");
  }
}

// h_i = max_j (g(i,j) - nu_j * delta), with the smallest achieving j.
void row_maxima(const GTable& t, double delta, Vec& h,
                std::vector<Eigen::Index>& arg_j) {
  const Eigen::Index n_mu = t.n_mu();
  const Eigen::Index n_nu = t.n_nu();
  h.resize(n_mu);
  arg_j.assign(static_cast<size_t>(n_mu), 0);
  for (Eigen::Index i = 0; i < n_mu; ++i) {
    double best = -kInf;
    Eigen::Index bj = 0;
    for (Eigen::Index j = 0; j < n_nu; ++j) {
      const double v = t.g(i, j) - t.spec.nu_ticks(j) * delta;
      if (v > best) {
        best = v;
        bj = j;
      }
    }
    h(i) = best;
    arg_j[static_cast<size_t>(i)] = bj;
  }
}

double median_positive(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](double d) { return !(d > 0.0) || !std::isfinite(d); }),
          v.end());
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  return v[mid];
}

void enumerate_lattice(int n, int resolution,
                       const std::function<void(const Vec&)>& visit) {
  Vec q(n);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == n - 1) {
      q(idx) = static_cast<double>(left) / resolution;
      visit(q);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      q(idx) = static_cast<double>(k) / resolution;
      rec(idx + 1, left - k);
    }
  };
  rec(0, resolution);
}

void check_brute_force_inputs(const Distribution& P, const DistortionMatrix& d,
                              double delta, int resolution) {
  if (P.size() != d.rows()) {
    throw AlphabetMismatch("source size vs distortion rows");
  }
  if (P.size() > 4) {
    throw AlphabetTooLarge("brute force enumeration capped at |X| = 4");
  }
  if (resolution < 1) throw DomainError("brute force: resolution < 1");
  if (delta < 0.0) throw DomainError("brute force: negative delta");
}

}  // namespace

void validate_curve(const Curve& curve) {
  const auto& pts = curve.points;
  for (size_t k = 1; k < pts.size(); ++k) {
    if (!(pts[k].x > pts[k - 1].x)) {
      throw DomainError("curve: x not strictly increasing");
    }
  }
  if (curve.kind == CurveKind::RMofE || curve.kind == CurveKind::RBofE ||
      curve.kind == CurveKind::EMofR || curve.kind == CurveKind::EBofR) {
    for (size_t k = 1; k < pts.size(); ++k) {
      if (pts[k].y_nats < pts[k - 1].y_nats) {
        throw DomainError("curve: y must be non-decreasing");
      }
    }
  }
  if (curve.kind == CurveKind::EBofR) {
    for (size_t k = 2; k < pts.size(); ++k) {
      const auto& a = pts[k - 2];
      const auto& b = pts[k - 1];
      const auto& c = pts[k];
      if (!std::isfinite(a.y_nats) || !std::isfinite(c.y_nats)) continue;
      const double lhs = (b.y_nats - a.y_nats) * (c.x - b.x);
      const double rhs = (c.y_nats - b.y_nats) * (b.x - a.x);
      if (lhs > rhs + 1e-9) {
        throw DomainError("curve: sampled convexity violated");
      }
    }
  }
}

GridReadout marton_inverse(const GTable& table, double delta, double E) {
  check_query(delta, E);
  const Eigen::Index n_mu = table.n_mu();
  const Eigen::Index n_nu = table.n_nu();
  GridReadout out;
  double best = -kInf;
  for (Eigen::Index j = 0; j < n_nu; ++j) {
    double inner = kInf;
    Eigen::Index bi = 0;
    for (Eigen::Index i = 0; i < n_mu; ++i) {
      const double v = table.spec.mu_ticks(i) * E + table.g(i, j);
      if (v < inner) {
        inner = v;
        bi = i;
      }
    }
    const double val = inner - table.spec.nu_ticks(j) * delta;
    if (val > best) {
      best = val;
      out.i = bi;
      out.j = j;
    }
  }
  out.value = InfoValue(best);
  out.mu = table.spec.mu_ticks(out.i);
  out.nu = table.spec.nu_ticks(out.j);
  return out;
}

GridReadout blahut_inverse(const GTable& table, double delta, double E) {
  check_query(delta, E);
  // Cells are evaluated with the same expression and rounding as in
  // marton_inverse, which makes min-max >= max-min hold exactly, not just
  // up to floating-point noise.
  GridReadout out;
  double best = kInf;
  for (Eigen::Index i = 0; i < table.n_mu(); ++i) {
    double inner = -kInf;
    Eigen::Index bj = 0;
    for (Eigen::Index j = 0; j < table.n_nu(); ++j) {
      const double v = table.spec.mu_ticks(i) * E + table.g(i, j) -
                       table.spec.nu_ticks(j) * delta;
      if (v > inner) {
        inner = v;
        bj = j;
      }
    }
    if (inner < best) {
      best = inner;
      out.i = i;
      out.j = bj;
    }
  }
  out.value = InfoValue(best);
  out.mu = table.spec.mu_ticks(out.i);
  out.nu = table.spec.nu_ticks(out.j);
  return out;
}

namespace {

Curve inverse_curve(const GTable& table, double delta, const Vec& e_ticks,
                    int threads, CurveKind kind,
                    GridReadout (*readout)(const GTable&, double, double)) {
  Curve curve;
  curve.kind = kind;
  curve.points.resize(static_cast<size_t>(e_ticks.size()));
  parallel_for(static_cast<int>(e_ticks.size()), threads, [&](int k) {
    const GridReadout r = readout(table, delta, e_ticks(k));
    curve.points[static_cast<size_t>(k)] =
        CurvePoint{e_ticks(k), r.value.nats, std::make_pair(r.mu, r.nu)};
  });
  validate_curve(curve);
  return curve;
}

}  // namespace

Curve marton_inverse_curve(const GTable& table, double delta,
                           const Vec& e_ticks, int threads) {
  return inverse_curve(table, delta, e_ticks, threads, CurveKind::RMofE,
                       &marton_inverse);
}

Curve blahut_inverse_curve(const GTable& table, double delta,
                           const Vec& e_ticks, int threads) {
  return inverse_curve(table, delta, e_ticks, threads, CurveKind::RBofE,
                       &blahut_inverse);
}

double inverse_to_exponent(const Curve& curve, double r_query) {
  if (curve.points.empty()) throw DomainError("inverse_to_exponent: empty");
  const auto& pts = curve.points;
  const double y_first = pts.front().y_nats;
  const double y_last = pts.back().y_nats;
  if (r_query < y_first || r_query > y_last) {
    throw OutOfRange("rate query outside [" + format_double(y_first) + ", " +
                     format_double(y_last) + "] nats");
  }
  const auto it =
      std::lower_bound(pts.begin(), pts.end(), r_query,
                       [](const CurvePoint& p, double r) { return p.y_nats < r; });
  const size_t k = static_cast<size_t>(it - pts.begin());
  if (k == 0) return pts[0].x;
  const auto& lo = pts[k - 1];
  const auto& hi = pts[k];
  return lo.x + (hi.x - lo.x) * (r_query - lo.y_nats) / (hi.y_nats - lo.y_nats);
}

InfoValue blahut_exponent(const GTable& table, double delta, double r) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("blahut_exponent: delta must be positive");
  }
  if (r < 0.0) throw OutOfRange("blahut_exponent: negative rate");
  Vec h;
  std::vector<Eigen::Index> arg_j;
  row_maxima(table, delta, h, arg_j);
  if (r > h(0) + 1e-12) {
    throw OutOfRange("rate " + format_double(r) +
                     " above the grid maximum " + format_double(h(0)));
  }
  double e = 0.0;
  for (Eigen::Index i = 1; i < table.n_mu(); ++i) {
    e = std::max(e, (r - h(i)) / table.spec.mu_ticks(i));
  }
  return InfoValue(e);
}

Curve blahut_exponent_curve(const GTable& table, double delta,
                            const Vec& r_ticks) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("blahut_exponent_curve: delta must be positive");
  }
  Curve curve;
  curve.kind = CurveKind::EBofR;
  Vec h;
  std::vector<Eigen::Index> arg_j;
  row_maxima(table, delta, h, arg_j);
  for (Eigen::Index k = 0; k < r_ticks.size(); ++k) {
    const double r = r_ticks(k);
    if (r < 0.0 || r > h(0) + 1e-12) {
      throw OutOfRange("rate tick outside [0, grid maximum]");
    }
    double e = 0.0;
    Eigen::Index bi = 0;
    for (Eigen::Index i = 1; i < table.n_mu(); ++i) {
      const double cand = (r - h(i)) / table.spec.mu_ticks(i);
      if (cand > e) {
        e = cand;
        bi = i;
      }
    }
    CurvePoint pt{r, e, std::nullopt};
    if (bi > 0) {
      pt.arg = std::make_pair(table.spec.mu_ticks(bi),
                              table.spec.nu_ticks(arg_j[static_cast<size_t>(bi)]));
    }
    curve.points.push_back(pt);
  }
  validate_curve(curve);
  return curve;
}

Curve exponent_from_inverse(const Curve& r_of_e, const Vec& r_ticks,
                            double jump_factor) {
  if (r_of_e.kind != CurveKind::RMofE && r_of_e.kind != CurveKind::RBofE) {
    throw DomainError("exponent_from_inverse: source must be an R-of-E curve");
  }
  if (r_of_e.points.empty()) throw DomainError("exponent_from_inverse: empty");
  Curve out;
  out.kind = r_of_e.kind == CurveKind::RMofE ? CurveKind::EMofR
                                             : CurveKind::EBofR;
  const double y_first = r_of_e.points.front().y_nats;
  const double y_last = r_of_e.points.back().y_nats;
  for (Eigen::Index k = 0; k < r_ticks.size(); ++k) {
    const double r = r_ticks(k);
    double e;
    if (r < y_first) {
      e = 0.0;
    } else if (r > y_last) {
      e = kInf;
    } else {
      e = inverse_to_exponent(r_of_e, r);
    }
    out.points.push_back(CurvePoint{r, e, std::nullopt});
  }

  detect_curve_jumps(out, jump_factor);
  return out;
}

void detect_curve_jumps(Curve& curve, double jump_factor) {
  curve.jumps.clear();
  std::vector<double> diffs;
  for (size_t k = 1; k < curve.points.size(); ++k) {
    const double a = curve.points[k - 1].y_nats;
    const double b = curve.points[k].y_nats;
    if (std::isfinite(a) && std::isfinite(b)) diffs.push_back(b - a);
  }
  const double med = median_positive(diffs);
  if (med <= 0.0) return;
  for (size_t k = 1; k < curve.points.size(); ++k) {
    const double a = curve.points[k - 1].y_nats;
    const double b = curve.points[k].y_nats;
    if (std::isfinite(a) && std::isfinite(b) && b - a > jump_factor * med) {
      curve.jumps.push_back(
          CurveJump{curve.points[k - 1].x, curve.points[k].x, a, b});
    }
  }
}

InfoValue brute_force_marton_inverse(const Distribution& P,
                                     const DistortionMatrix& d, double delta,
                                     double E, int resolution) {
  check_brute_force_inputs(P, d, delta, resolution);
  if (E < 0.0) throw DomainError("brute force: negative E");
  double best = 0.0;
  const auto consider = [&](const Vec& q_raw) {
    const Distribution q{q_raw, (q_raw.array() == 0.0).any()};
    if (kl_divergence(q, P).nats > E + 1e-12) return;
    best = std::max(best, rate_distortion(q, d, delta).rate.nats);
  };
  consider(P.probs);  // the exact center is always inside the ball
  enumerate_lattice(static_cast<int>(P.size()), resolution, consider);
  return InfoValue(best);
}

InfoValue brute_force_marton_exponent(const Distribution& P,
                                      const DistortionMatrix& d, double delta,
                                      double r, int resolution) {
  check_brute_force_inputs(P, d, delta, resolution);
  if (r < 0.0) throw DomainError("brute force: negative rate");
  std::vector<std::pair<double, Vec>> candidates;
  const auto collect = [&](const Vec& q_raw) {
    const Distribution q{q_raw, (q_raw.array() == 0.0).any()};
    const double kl = kl_divergence(q, P).nats;
    if (std::isfinite(kl)) candidates.emplace_back(kl, q_raw);
  };
  collect(P.probs);
  enumerate_lattice(static_cast<int>(P.size()), resolution, collect);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [kl, q_raw] : candidates) {
    const Distribution q{q_raw, (q_raw.array() == 0.0).any()};
    if (rate_distortion(q, d, delta).rate.nats >= r - 1e-12) {
      return InfoValue(kl);
    }
  }
  return InfoValue(kInf);
}

std::string curve_to_csv(const Curve& curve, double x_scale) {
  std::string body = "x,y_nats,y_bits,mu_opt,nu_opt\n";
  for (const auto& pt : curve.points) {
    body += format_double(pt.x * x_scale);
    body += ',';
    if (std::isfinite(pt.y_nats)) {
      body += format_double(pt.y_nats);
      body += ',';
      body += format_double(pt.y_nats / kLn2);
    } else {
      body += ',';
    }
    body += ',';
    if (pt.arg) {
      body += format_double(pt.arg->first);
      body += ',';
      body += format_double(pt.arg->second);
    } else {
      body += ',';
    }
    body += '\n';
  }
  return body;
}

Curve curve_from_csv(const std::vector<std::string>& lines, CurveKind kind,
                     double x_scale) {
  Curve curve;
  curve.kind = kind;
  if (lines.empty() || lines[0] != "x,y_nats,y_bits,mu_opt,nu_opt") {
    throw ParseError("missing curve header");
  }
  for (size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const auto fields = split_csv_line(lines[k]);
    if (fields.size() != 5) {
      throw ParseError("curve line " + std::to_string(k + 1) +
                       ": expected 5 fields");
    }
    CurvePoint pt;
    pt.x = parse_double(fields[0]) / x_scale;
    pt.y_nats = fields[1].empty() ? kInf : parse_double(fields[1]);
    if (!fields[3].empty() || !fields[4].empty()) {
      pt.arg = std::make_pair(parse_double(fields[3]), parse_double(fields[4]));
    }
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace mek
