#include "mek/gtable.hpp"

#include <charconv>
#include <filesystem>
#include <vector>

#include "mek/csv.hpp"
#include "mek/parallel.hpp"
#include "mek/simplex.hpp"

namespace mek {

namespace {

constexpr double kMassFloor = 1e-300;
constexpr double kLpMuThreshold = 1e-3;
constexpr double kWarmRestart = 1e-2;

void check_pair(const Distribution& P, const DistortionMatrix& d) {
  if (P.size() != d.rows()) {
    throw AlphabetMismatch("source size " + std::to_string(P.size()) +
                           " vs distortion rows " + std::to_string(d.rows()));
  }
}

void check_strictly_increasing(const Vec& v, const char* name) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (!(v(i) > v(i - 1))) {
      throw DomainError(std::string(name) + " ticks must increase strictly");
    }
  }
}

// Generic fixed-point loop; p0 must be positive and normalized.
GMinResult arimoto_dense(double rho, const Distribution& P,
                         const DistortionMatrix& d, double nu, double eps,
                         int max_itr, Vec p0, std::vector<double>* g_trace) {
  auto ch = make_channel(d, nu);
  const Eigen::Index nx = d.rows();
  std::vector<Eigen::Index> supp;
  for (Eigen::Index x = 0; x < nx; ++x) {
    if (P(x) > 0.0) supp.push_back(x);
  }
  Vec ln_p_supp(static_cast<Eigen::Index>(supp.size()));
  for (size_t k = 0; k < supp.size(); ++k) {
    ln_p_supp(static_cast<Eigen::Index>(k)) = std::log(P(supp[k]));
  }

  GMinResult out;
  Vec p = std::move(p0);
  Vec A(nx), terms(ln_p_supp.size()), w(nx), s(d.cols());
  for (int it = 1; it <= max_itr; ++it) {
    ch->forward(p, A);
    A = A.cwiseMax(kMassFloor);
    for (size_t k = 0; k < supp.size(); ++k) {
      terms(static_cast<Eigen::Index>(k)) =
          ln_p_supp(static_cast<Eigen::Index>(k)) - rho * std::log(A(supp[k]));
    }
    const double ln_z = log_sum_exp(terms);
    out.g = ln_z / rho;
    out.iterations = it;
    if (g_trace) g_trace->push_back(out.g);
    w.setZero();
    double m = -kInf;
    for (size_t k = 0; k < supp.size(); ++k) {
      const double e = ln_p_supp(static_cast<Eigen::Index>(k)) -
                       (1.0 + rho) * std::log(A(supp[k]));
      w(supp[k]) = e;
      m = std::max(m, e);
    }
    for (size_t k = 0; k < supp.size(); ++k) {
      w(supp[k]) = std::exp(w(supp[k]) - m);
    }
    ch->backward(w, s);
    // Convexity certificate: G(p) - min G <= max_y e^m s(y) / Z - 1. An
    // objective-decrease test is no certificate here: an iterate parked on
    // a face of the simplex looks stationary while the minimum needs mass
    // the multiplicative update can only regrow slowly.
    if (m + std::log(s.maxCoeff()) - ln_z <= std::log1p(eps)) {
      out.converged = true;
      break;
    }
    if (it == max_itr) {
      out.converged = false;
      break;
    }
    p = p.cwiseProduct(s.array().pow(1.0 / (1.0 + rho)).matrix())
            .cwiseMax(kMassFloor);
    p /= p.sum();
  }
  out.p_y = Distribution{std::move(p), false};
  return out;
}

// Block-mass version of the same loop for block-uniform P; exact because
// the update preserves uniformity within blocks.
GMinResult arimoto_collapsed(double rho, const TwoBlockShape& shape,
                             const Eigen::Vector2d& q2, double nu, double eps,
                             int max_itr, Eigen::Vector2d mass,
                             std::vector<double>* g_trace) {
  const CollapsedTwoBlock cw = collapse_two_block(shape, nu);
  GMinResult out;
  Eigen::Vector2d A, terms, w;
  for (int it = 1; it <= max_itr; ++it) {
    A = (cw.w * mass).cwiseMax(kMassFloor);
    for (int k = 0; k < 2; ++k) {
      terms(k) = q2(k) > 0.0 ? std::log(q2(k)) - rho * std::log(A(k)) : -kInf;
    }
    const double ln_z = log_sum_exp(terms);
    out.g = ln_z / rho;
    out.iterations = it;
    if (g_trace) g_trace->push_back(out.g);
    double m = -kInf;
    for (int k = 0; k < 2; ++k) {
      w(k) = q2(k) > 0.0 ? std::log(q2(k)) - (1.0 + rho) * std::log(A(k))
                         : -kInf;
      m = std::max(m, w(k));
    }
    for (int k = 0; k < 2; ++k) {
      w(k) = q2(k) > 0.0 ? std::exp(w(k) - m) : 0.0;
    }
    const Eigen::Vector2d s = cw.w * w;  // symmetric kernel
    if (m + std::log(s.maxCoeff()) - ln_z <= std::log1p(eps)) {
      out.converged = true;
      break;
    }
    if (it == max_itr) {
      out.converged = false;
      break;
    }
    mass = mass
               .cwiseProduct(s.array().pow(1.0 / (1.0 + rho)).matrix())
               .cwiseMax(kMassFloor);
    mass /= mass.sum();
  }
  out.p_y = Distribution{expand_block_masses(shape, mass), false};
  return out;
}

// Full-precision value serialization for content hashing.
void append_exact(std::string& blob, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  blob.append(buf, res.ptr);
  blob.push_back(';');
}

uint64_t fnv1a(const std::string& blob) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : blob) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Vec linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("linspace: need at least one tick");
  if (n == 1) return Vec::Constant(1, lo);
  Vec v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) v(i) = lo + step * i;
  v(n - 1) = hi;
  return v;
}

GridSpec GridSpec::defaults() {
  GridSpec spec;
  spec.mu_ticks = linspace(0.0, 2.0, 128);
  spec.nu_ticks = linspace(0.0, 50.0, 256);
  return spec;
}

void validate_grid(const GridSpec& spec) {
  if (spec.mu_ticks.size() == 0 || spec.nu_ticks.size() == 0) {
    throw DomainError("grid: empty mu or nu ticks");
  }
  if (spec.mu_ticks(0) != 0.0) {
    throw DomainError("grid: the mu = 0 tick is mandatory");
  }
  if (spec.nu_ticks(0) != 0.0) {
    throw DomainError("grid: the nu = 0 tick is mandatory");
  }
  check_strictly_increasing(spec.mu_ticks, "mu");
  check_strictly_increasing(spec.nu_ticks, "nu");
  if (spec.e_ticks.size() > 0) {
    if (spec.e_ticks(0) < 0.0) throw DomainError("grid: negative E tick");
    check_strictly_increasing(spec.e_ticks, "E");
  }
}

double g_of_py(double mu, double nu, const Distribution& p_y,
               const Distribution& P, const DistortionMatrix& d) {
  check_pair(P, d);
  if (p_y.size() != d.cols()) {
    throw AlphabetMismatch("reproduction size " + std::to_string(p_y.size()) +
                           " vs distortion cols " + std::to_string(d.cols()));
  }
  if (mu < 0.0 || nu < 0.0) throw DomainError("g_of_py: negative parameter");
  auto ch = make_channel(d, nu);
  Vec A(d.rows());
  ch->forward(p_y.probs, A);
  if (mu == 0.0) {
    double min_a = kInf;
    for (Eigen::Index x = 0; x < P.size(); ++x) {
      if (P(x) > 0.0) min_a = std::min(min_a, A(x));
    }
    return -std::log(min_a);
  }
  const double rho = 1.0 / mu;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(P.size()));
  for (Eigen::Index x = 0; x < P.size(); ++x) {
    if (P(x) > 0.0) terms.push_back(std::log(P(x)) - rho * std::log(A(x)));
  }
  return mu * log_sum_exp(Eigen::Map<const Vec>(
                  terms.data(), static_cast<Eigen::Index>(terms.size())));
}

GMinResult arimoto_minimize(double rho, double nu, const Distribution& P,
                            const DistortionMatrix& d, double eps, int max_itr,
                            const Vec* warm_start,
                            std::vector<double>* g_trace) {
  check_pair(P, d);
  if (rho <= 0.0) throw DomainError("arimoto_minimize: rho must be positive");
  if (nu < 0.0) throw DomainError("arimoto_minimize: negative nu");
  if (eps <= 0.0 || max_itr < 1) {
    throw DomainError("arimoto_minimize: bad tolerance settings");
  }

  if (d.two_block) {
    const auto q2 = block_masses(*d.two_block, P.probs);
    std::optional<Eigen::Vector2d> m0;
    if (warm_start) {
      m0 = block_masses(*d.two_block, *warm_start);
    } else {
      const double ny = static_cast<double>(d.cols());
      m0 = Eigen::Vector2d(d.two_block->size_a / ny, d.two_block->size_b / ny);
    }
    if (q2 && m0) {
      Eigen::Vector2d mass = m0->cwiseMax(kMassFloor);
      mass /= mass.sum();
      return arimoto_collapsed(rho, *d.two_block, *q2, nu, eps, max_itr, mass,
                               g_trace);
    }
  }

  Vec p0;
  if (warm_start) {
    if (warm_start->size() != d.cols()) {
      throw DimensionMismatch("arimoto_minimize: warm start size");
    }
    p0 = warm_start->cwiseMax(kMassFloor);
    p0 /= p0.sum();
  } else {
    p0 = Vec::Constant(d.cols(), 1.0 / static_cast<double>(d.cols()));
  }
  return arimoto_dense(rho, P, d, nu, eps, max_itr, std::move(p0), g_trace);
}

GMinResult g_mu_zero(double nu, const Distribution& P,
                     const DistortionMatrix& d) {
  check_pair(P, d);
  if (nu < 0.0 || !std::isfinite(nu)) throw DomainError("g_mu_zero: bad nu");

  GMinResult out;
  double c_star = 0.0;
  if (d.two_block && block_masses(*d.two_block, P.probs)) {
    // Uniformity within blocks carries over to the LP optimum, so two block
    // masses plus c suffice.
    const auto q2 = *block_masses(*d.two_block, P.probs);
    const CollapsedTwoBlock cw = collapse_two_block(*d.two_block, nu);
    std::vector<LpConstraint> rows;
    for (int k = 0; k < 2; ++k) {
      if (q2(k) <= 0.0) continue;
      LpConstraint row;
      row.coeffs = Vec(3);
      row.coeffs << -cw.w(k, 0), -cw.w(k, 1), 1.0;
      rows.push_back(std::move(row));
    }
    LpConstraint simplex_row;
    simplex_row.coeffs = Vec(3);
    simplex_row.coeffs << 1.0, 1.0, 0.0;
    simplex_row.relation = Relation::Eq;
    simplex_row.rhs = 1.0;
    rows.push_back(std::move(simplex_row));
    Vec objective = Vec::Zero(3);
    objective(2) = 1.0;
    LpSolution sol = lp_simplex_solve(objective, rows);
    c_star = sol.optimum;
    out.iterations = sol.pivots;
    out.p_y = Distribution{
        expand_block_masses(*d.two_block,
                            Eigen::Vector2d(sol.x(0), sol.x(1))),
        false};
  } else {
    const Eigen::Index ny = d.cols();
    const Mat B = (-nu * d.values.array()).exp();
    std::vector<LpConstraint> rows;
    for (Eigen::Index x = 0; x < P.size(); ++x) {
      if (P(x) <= 0.0) continue;
      LpConstraint row;
      row.coeffs = Vec(ny + 1);
      row.coeffs.head(ny) = -B.row(x).transpose();
      row.coeffs(ny) = 1.0;
      rows.push_back(std::move(row));
    }
    LpConstraint simplex_row;
    simplex_row.coeffs = Vec::Zero(ny + 1);
    simplex_row.coeffs.head(ny).setOnes();
    simplex_row.relation = Relation::Eq;
    simplex_row.rhs = 1.0;
    rows.push_back(std::move(simplex_row));
    Vec objective = Vec::Zero(ny + 1);
    objective(ny) = 1.0;
    LpSolution sol = lp_simplex_solve(objective, rows);
    c_star = sol.optimum;
    out.iterations = sol.pivots;
    Vec p = sol.x.head(ny);
    const double total = p.sum();
    if (total > 0.0) p /= total;
    const bool zero_mass = (p.array() == 0.0).any();
    out.p_y = Distribution{std::move(p), zero_mass};
  }
  if (!(c_star > 0.0) || c_star > 1.0 + 1e-9) {
    throw Error("g_mu_zero: optimum " + std::to_string(c_star) +
                " outside (0, 1]");
  }
  out.g = std::max(0.0, -std::log(std::min(c_star, 1.0)));
  out.converged = true;
  return out;
}

GTable build_gtable(const Distribution& P, const DistortionMatrix& d,
                    const GridSpec& spec, double eps, int max_itr,
                    const GTableOptions& opt) {
  check_pair(P, d);
  validate_grid(spec);
  const int n_mu = static_cast<int>(spec.mu_ticks.size());
  const int n_nu = static_cast<int>(spec.nu_ticks.size());

  GTable table;
  table.g.resize(n_mu, n_nu);
  table.iterations.resize(n_mu, n_nu);
  table.converged.resize(n_mu, n_nu);
  table.spec = spec;
  table.provenance = opt.provenance;

  parallel_for(n_mu, opt.threads, [&](int i) {
    const double mu = table.spec.mu_ticks(i);
    Vec warm;
    for (int j = 0; j < n_nu; ++j) {
      const double nu = table.spec.nu_ticks(j);
      GMinResult cell;
      if (mu < kLpMuThreshold) {
        cell = g_mu_zero(nu, P, d);
      } else if (j == 0) {
        cell = arimoto_minimize(1.0 / mu, nu, P, d, eps, max_itr);
      } else {
        // The neighbor's optimizer can sit on a face the next cell must
        // leave, so blend a sliver of uniform back in before reusing it.
        const Vec seed =
            (1.0 - kWarmRestart) * warm +
            Vec::Constant(warm.size(),
                          kWarmRestart / static_cast<double>(warm.size()));
        cell = arimoto_minimize(1.0 / mu, nu, P, d, eps, max_itr, &seed);
      }
      table.g(i, j) = cell.g;
      table.iterations(i, j) = cell.iterations;
      table.converged(i, j) = cell.converged ? 1 : 0;
      warm = std::move(cell.p_y.probs);
    }
  });
  table.nonconverged_cells =
      static_cast<int>((table.converged.array() == 0).count());
  return table;
}

void write_gtable_csv(const GTable& table, const std::string& path) {
  std::string body = "mu,nu,g_nats,iterations,converged\n";
  for (Eigen::Index i = 0; i < table.n_mu(); ++i) {
    for (Eigen::Index j = 0; j < table.n_nu(); ++j) {
      body += format_double(table.spec.mu_ticks(i));
      body += ',';
      body += format_double(table.spec.nu_ticks(j));
      body += ',';
      body += format_double(table.g(i, j));
      body += ',';
      body += std::to_string(table.iterations(i, j));
      body += ',';
      body += std::to_string(table.converged(i, j));
      body += '\n';
    }
  }
  write_file_atomic(path, body);
}

GTable read_gtable_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "mu,nu,g_nats,iterations,converged") {
    throw ParseError(path + ": missing gtable header");
  }
  std::vector<double> mu, nu, g;
  std::vector<int> itr, conv;
  for (size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const auto fields = split_csv_line(lines[k]);
    if (fields.size() != 5) {
      throw ParseError(path + ":" + std::to_string(k + 1) +
                       ": expected 5 fields");
    }
    mu.push_back(parse_double(fields[0]));
    nu.push_back(parse_double(fields[1]));
    g.push_back(parse_double(fields[2]));
    itr.push_back(static_cast<int>(parse_long(fields[3])));
    conv.push_back(static_cast<int>(parse_long(fields[4])));
  }
  if (mu.empty()) throw ParseError(path + ": empty gtable");

  // Row-major layout: nu cycles fastest, mu changes once per row.
  Eigen::Index n_nu = 0;
  while (n_nu < static_cast<Eigen::Index>(nu.size()) && mu[n_nu] == mu[0]) {
    ++n_nu;
  }
  const Eigen::Index total = static_cast<Eigen::Index>(mu.size());
  if (n_nu == 0 || total % n_nu != 0) {
    throw ParseError(path + ": rows do not form a full grid");
  }
  const Eigen::Index n_mu = total / n_nu;

  GTable table;
  table.g.resize(n_mu, n_nu);
  table.iterations.resize(n_mu, n_nu);
  table.converged.resize(n_mu, n_nu);
  table.spec.mu_ticks.resize(n_mu);
  table.spec.nu_ticks.resize(n_nu);
  for (Eigen::Index j = 0; j < n_nu; ++j) table.spec.nu_ticks(j) = nu[j];
  for (Eigen::Index i = 0; i < n_mu; ++i) {
    table.spec.mu_ticks(i) = mu[i * n_nu];
    for (Eigen::Index j = 0; j < n_nu; ++j) {
      const Eigen::Index k = i * n_nu + j;
      if (mu[k] != table.spec.mu_ticks(i) || nu[k] != table.spec.nu_ticks(j)) {
        throw ParseError(path + ": grid ticks are not row-major consistent");
      }
      table.g(i, j) = g[k];
      table.iterations(i, j) = itr[k];
      table.converged(i, j) = conv[k];
    }
  }
  table.nonconverged_cells =
      static_cast<int>((table.converged.array() == 0).count());
  validate_grid(table.spec);
  return table;
}

std::string gtable_cache_key(const Distribution& P, const DistortionMatrix& d,
                             const GridSpec& spec, double eps, int max_itr) {
  std::string blob = "gtable-v1;";
  append_exact(blob, static_cast<double>(P.size()));
  for (Eigen::Index i = 0; i < P.size(); ++i) append_exact(blob, P(i));
  append_exact(blob, static_cast<double>(d.rows()));
  append_exact(blob, static_cast<double>(d.cols()));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      append_exact(blob, d.values(i, j));
    }
  }
  for (Eigen::Index i = 0; i < spec.mu_ticks.size(); ++i) {
    append_exact(blob, spec.mu_ticks(i));
  }
  blob.push_back('|');
  for (Eigen::Index j = 0; j < spec.nu_ticks.size(); ++j) {
    append_exact(blob, spec.nu_ticks(j));
  }
  append_exact(blob, eps);
  append_exact(blob, static_cast<double>(max_itr));

  const uint64_t h = fnv1a(blob);
  char buf[17];
  auto res = std::to_chars(buf, buf + sizeof(buf), h, 16);
  const std::string hex(buf, res.ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

GTable load_or_build_gtable(const Distribution& P, const DistortionMatrix& d,
                            const GridSpec& spec, double eps, int max_itr,
                            const GTableOptions& opt,
                            const std::string& cache_dir) {
  validate_grid(spec);
  if (cache_dir.empty()) {
    return build_gtable(P, d, spec, eps, max_itr, opt);
  }
  const std::string key = gtable_cache_key(P, d, spec, eps, max_itr);
  const std::string path = cache_dir + "/gtable-" + key + ".csv";
  if (std::filesystem::exists(path)) {
    try {
      GTable table = read_gtable_csv(path);
      const bool same_grid =
          table.spec.mu_ticks.size() == spec.mu_ticks.size() &&
          table.spec.nu_ticks.size() == spec.nu_ticks.size() &&
          (table.spec.mu_ticks - spec.mu_ticks).cwiseAbs().maxCoeff() <=
              1e-12 &&
          (table.spec.nu_ticks - spec.nu_ticks).cwiseAbs().maxCoeff() <= 1e-12;
      if (same_grid) {
        table.spec = spec;
        table.provenance = opt.provenance;
        return table;
      }
    } catch (const Error&) {
      // Unreadable cache entry: fall through and rebuild it.
    }
  }
  GTable table = build_gtable(P, d, spec, eps, max_itr, opt);
  std::filesystem::create_directories(cache_dir);
  write_gtable_csv(table, path);
  return table;
}

}  // namespace mek
