#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mek/ahlswede.hpp"
#include "mek/csv.hpp"
#include "mek/exponents.hpp"
#include "mek/gtable.hpp"
#include "mek/instance.hpp"
#include "mek/rd.hpp"

namespace {

using namespace mek;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Shared {
  std::string instance_path;
  int figure = 0;
  double delta = kUnset;
  double emin = kUnset, emax = kUnset;
  int esteps = 0;
  double rmin = kUnset, rmax = kUnset;
  int rsteps = 0;
  double mu_max = 2.0;
  int mu_steps = 128;
  double nu_max = 50.0;
  int nu_steps = 256;
  bool bits = false;
  bool nats = false;
  std::string table_cache;
  int threads = 1;
  std::string out;
  int nlambda = 0;
  std::string kind = "blahut";
};

InstanceFile resolve_instance(const Shared& o) {
  if (o.figure != 0 && !o.instance_path.empty()) {
    throw DomainError("--figure and --instance are mutually exclusive");
  }
  if (o.figure != 0) {
    const std::string line = o.figure <= 3
                                 ? "ahlswede sizeA 8 sizeB 512 xi 0.01 b 10"
                                 : "ahlswede sizeA 50 sizeB 2500 xi 0.2 b 10";
    return parse_instance_text({line}, "figure-preset");
  }
  if (o.instance_path.empty()) {
    throw DomainError("need --instance PATH or --figure K");
  }
  return parse_instance(o.instance_path);
}

bool resolve_bits(const Shared& o, const InstanceFile& f) {
  if (o.bits) return true;
  if (o.nats) return false;
  if (f.units) return *f.units == "bits";
  return true;
}

double resolve_delta(const Shared& o, const InstanceFile& f) {
  if (!std::isnan(o.delta)) {
    if (!(o.delta >= 0.0)) throw DomainError("--delta must be nonnegative");
    return o.delta;
  }
  if (f.ahlswede) return f.ahlswede->delta;
  throw DomainError("--delta is required for an explicit instance");
}

std::string resolve_cache(const Shared& o) {
  if (!o.table_cache.empty()) return o.table_cache;
  const char* env = std::getenv("MEK_CACHE_DIR");
  return env != nullptr ? env : "";
}

// Inputs arrive in the report units; ticks are kept in nats internally.
Vec make_e_ticks(const Shared& o, double in_scale) {
  const double lo = std::isnan(o.emin) ? 0.0 : o.emin * in_scale;
  const double hi = std::isnan(o.emax) ? 1.5 * kLn2 : o.emax * in_scale;
  const int n = o.esteps > 0 ? o.esteps : 20;
  if (lo < 0.0 || !std::isfinite(hi) || (n == 1 ? hi < lo : !(hi > lo))) {
    throw DomainError("bad E range");
  }
  return linspace(lo, hi, n);
}

GTable load_table(const Shared& o, const InstanceFile& f, const Vec& e_ticks) {
  GridSpec spec;
  spec.mu_ticks = linspace(0.0, o.mu_max, o.mu_steps);
  spec.nu_ticks = linspace(0.0, o.nu_max, o.nu_steps);
  spec.e_ticks = e_ticks;
  GTableOptions opt;
  opt.threads = o.threads;
  opt.provenance = o.figure != 0
                       ? "figure-" + std::to_string(o.figure)
                       : o.instance_path;
  return load_or_build_gtable(f.source, f.d, spec, 1e-10, 20000, opt,
                              resolve_cache(o));
}

double grid_max_rate(const GTable& t, double delta) {
  double h0 = -kInf;
  for (Eigen::Index j = 0; j < t.n_nu(); ++j) {
    h0 = std::max(h0, t.g(0, j) - t.spec.nu_ticks(j) * delta);
  }
  return h0;
}

void emit(const Curve& curve, double x_scale, const std::string& path) {
  write_file_atomic(path, curve_to_csv(curve, x_scale));
  std::cout << "wrote " << path << " (" << curve.points.size() << " rows)\n";
}

void print_jumps(const Curve& curve, double x_scale, const char* x_name,
                 bool bits) {
  const double ys = bits ? 1.0 / kLn2 : 1.0;
  const char* unit = bits ? "bits" : "nats";
  for (const CurveJump& j : curve.jumps) {
    std::cout << "jump at " << x_name << " = " << format_double(j.x_high * x_scale)
              << ": E " << format_double(j.y_low * ys) << " -> "
              << format_double(j.y_high * ys) << " " << unit << "\n";
  }
}

const AhlswedeInstance& require_generator(const InstanceFile& f,
                                          const char* cmd) {
  if (!f.ahlswede) {
    throw DomainError(std::string(cmd) +
                      " needs an ahlswede generator instance (or --figure)");
  }
  return *f.ahlswede;
}

void run_rd(const Shared& o) {
  const InstanceFile f = resolve_instance(o);
  const bool bits = resolve_bits(o, f);
  const double delta = resolve_delta(o, f);
  const RdResult res = rate_distortion(f.source, f.d, delta);

  Curve curve;
  curve.kind = CurveKind::RdOfLambda;
  curve.points.push_back(CurvePoint{delta, res.rate.nats, std::nullopt});
  emit(curve, 1.0, o.out.empty() ? "rd.csv" : o.out);
  std::cout << "R(delta = " << format_double(delta) << ") = "
            << format_double(bits ? res.rate.bits() : res.rate.nats)
            << (bits ? " bits" : " nats")
            << ", slope nu = " << format_double(res.nu_star) << "\n";
}

void run_sweep(const Shared& o) {
  const InstanceFile f = resolve_instance(o);
  const bool bits = resolve_bits(o, f);
  if (!std::isnan(o.delta)) {
    throw DomainError("sweep uses the generator's delta; drop --delta");
  }
  const AhlswedeInstance& inst = require_generator(f, "sweep");
  const int n = o.nlambda > 0 ? o.nlambda : (o.figure != 0 ? 10001 : 2001);
  const SweepReport report = rd_lambda_sweep(inst, n, o.threads);

  emit(report.curve, 1.0, o.out.empty() ? "sweep.csv" : o.out);
  const double ys = bits ? 1.0 / kLn2 : 1.0;
  const char* unit = bits ? "bits" : "nats";
  std::cout << "global maximum R = " << format_double(report.r_star_nats * ys)
            << " " << unit << " at lambda = "
            << format_double(report.lambda_star) << "\n";
  if (report.bimodal) {
    std::cout << "local maximum R = " << format_double(report.r_1_nats * ys)
              << " " << unit << " at lambda = "
              << format_double(report.lambda_1) << "\n";
    std::cout << "level re-crossing at lambda = "
              << format_double(lambda2_crossing(inst, report.curve)) << "\n";
  } else {
    std::cout << "sweep is unimodal\n";
  }
}

void run_gtable(const Shared& o) {
  const InstanceFile f = resolve_instance(o);
  const GTable table = load_table(o, f, Vec());
  const std::string path = o.out.empty() ? "gtable.csv" : o.out;
  write_gtable_csv(table, path);
  std::cout << "wrote " << path << " (" << table.n_mu() << " x "
            << table.n_nu() << " cells, " << table.nonconverged_cells
            << " nonconverged)\n";
}

void run_inverse(const Shared& o, bool marton) {
  const InstanceFile f = resolve_instance(o);
  const bool bits = resolve_bits(o, f);
  const double delta = resolve_delta(o, f);
  const double in_scale = bits ? kLn2 : 1.0;
  const Vec e_ticks = make_e_ticks(o, in_scale);
  const GTable table = load_table(o, f, e_ticks);
  const Curve curve =
      marton ? marton_inverse_curve(table, delta, e_ticks, o.threads)
             : blahut_inverse_curve(table, delta, e_ticks, o.threads);
  const std::string def = marton ? "marton_inverse.csv" : "blahut_inverse.csv";
  emit(curve, bits ? 1.0 / kLn2 : 1.0, o.out.empty() ? def : o.out);

  const double ys = bits ? 1.0 / kLn2 : 1.0;
  const char* unit = bits ? "bits" : "nats";
  std::cout << "R(E = " << format_double(curve.points.front().x * ys) << ") = "
            << format_double(curve.points.front().y_nats * ys) << " " << unit
            << "; R(E = " << format_double(curve.points.back().x * ys)
            << ") = " << format_double(curve.points.back().y_nats * ys) << " "
            << unit << "\n";
}

void run_exponent(const Shared& o) {
  const InstanceFile f = resolve_instance(o);
  const bool bits = resolve_bits(o, f);
  const double delta = resolve_delta(o, f);
  const double in_scale = bits ? kLn2 : 1.0;
  const double x_scale = bits ? 1.0 / kLn2 : 1.0;
  const Vec e_ticks = make_e_ticks(o, in_scale);
  const GTable table = load_table(o, f, e_ticks);

  const double h0 = grid_max_rate(table, delta);
  const double lo = std::isnan(o.rmin) ? 0.0 : o.rmin * in_scale;
  const double hi = std::isnan(o.rmax) ? h0 : o.rmax * in_scale;
  const int n = o.rsteps > 0 ? o.rsteps : 40;
  if (lo < 0.0 || !(hi > lo)) throw DomainError("bad R range");
  const Vec r_ticks = linspace(lo, hi, n);

  Curve curve;
  if (o.kind == "blahut") {
    curve = blahut_exponent_curve(table, delta, r_ticks);
  } else if (o.kind == "marton") {
    const Curve r_of_e = marton_inverse_curve(table, delta, e_ticks, o.threads);
    curve = exponent_from_inverse(r_of_e, r_ticks);
    print_jumps(curve, x_scale, "R", bits);
  } else {
    throw DomainError("--kind must be 'blahut' or 'marton'");
  }
  emit(curve, x_scale, o.out.empty() ? "exponent.csv" : o.out);
}

void run_ahlswede_exact(const Shared& o) {
  const InstanceFile f = resolve_instance(o);
  const bool bits = resolve_bits(o, f);
  if (!std::isnan(o.delta)) {
    throw DomainError("ahlswede-exact uses the generator's delta; drop --delta");
  }
  const AhlswedeInstance& inst = require_generator(f, "ahlswede-exact");
  const int n = o.nlambda > 0 ? o.nlambda : 10001;
  const SweepReport report = rd_lambda_sweep(inst, n, o.threads);
  const Curve curve = marton_exact_from_sweep(inst, report.curve);

  const double x_scale = bits ? 1.0 / kLn2 : 1.0;
  emit(curve, x_scale, o.out.empty() ? "ahlswede_exact.csv" : o.out);
  print_jumps(curve, x_scale, "R", bits);
  if (report.bimodal) {
    std::cout << "level re-crossing at lambda = "
              << format_double(lambda2_crossing(inst, report.curve)) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  Shared o;
  CLI::App app{"rate-distortion reliability toolkit"};
  app.require_subcommand(1);

  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--instance", o.instance_path, "instance file path");
    cmd->add_option("--figure", o.figure,
                    "preset: 1|2|3 use the (8,512) xi=0.01 instance, 5|6 the "
                    "(50,2500) xi=0.2 one")
        ->check(CLI::IsMember({1, 2, 3, 5, 6}));
    cmd->add_option("--threads", o.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output CSV path");
  };
  const auto add_units = [&](CLI::App* cmd) {
    auto* fb = cmd->add_flag("--bits", o.bits, "report in bits (default)");
    auto* fn = cmd->add_flag("--nats", o.nats, "report in nats");
    fb->excludes(fn);
    fn->excludes(fb);
  };
  const auto add_delta = [&](CLI::App* cmd) {
    cmd->add_option("--delta", o.delta,
                    "distortion level (defaults to the generator's)");
  };
  const auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--mu-max", o.mu_max, "largest mu tick (default 2)");
    cmd->add_option("--mu-steps", o.mu_steps, "mu ticks (default 128)")
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--nu-max", o.nu_max, "largest nu tick in nats (default 50)");
    cmd->add_option("--nu-steps", o.nu_steps, "nu ticks (default 256)")
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--table-cache", o.table_cache,
                    "table cache directory (default $MEK_CACHE_DIR)");
  };
  const auto add_erange = [&](CLI::App* cmd) {
    cmd->add_option("--emin", o.emin, "smallest E tick (default 0)");
    cmd->add_option("--emax", o.emax, "largest E tick (default 1.5 bits)");
    cmd->add_option("--esteps", o.esteps, "E ticks (default 20)")
        ->check(CLI::Range(1, 1000000));
  };

  CLI::App* rd = app.add_subcommand("rd", "rate-distortion value R(delta)");
  add_input(rd);
  add_units(rd);
  add_delta(rd);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "R(delta | Q_lambda) over the mixture family");
  add_input(sweep);
  add_units(sweep);
  add_delta(sweep);
  sweep->add_option("--nlambda", o.nlambda,
                    "lambda grid size (default 2001; 10001 with --figure)")
      ->check(CLI::Range(3, 10000000));

  CLI::App* gt = app.add_subcommand("gtable", "build the g(mu,nu) table");
  add_input(gt);
  add_grid(gt);

  CLI::App* mi = app.add_subcommand(
      "marton-inverse", "inverse exponent R_M(E) from the table");
  add_input(mi);
  add_units(mi);
  add_delta(mi);
  add_grid(mi);
  add_erange(mi);

  CLI::App* bi = app.add_subcommand(
      "blahut-inverse", "inverse exponent R_B(E) from the table");
  add_input(bi);
  add_units(bi);
  add_delta(bi);
  add_grid(bi);
  add_erange(bi);

  CLI::App* ex = app.add_subcommand("exponent", "exponent-of-rate curves");
  add_input(ex);
  add_units(ex);
  add_delta(ex);
  add_grid(ex);
  add_erange(ex);
  ex->add_option("--rmin", o.rmin, "smallest R tick (default 0)");
  ex->add_option("--rmax", o.rmax,
                 "largest R tick (default: the grid's certifiable maximum)");
  ex->add_option("--rsteps", o.rsteps, "R ticks (default 40)")
      ->check(CLI::Range(1, 1000000));
  ex->add_option("--kind", o.kind, "blahut (direct) or marton (inverted)")
      ->check(CLI::IsMember({"blahut", "marton"}));

  CLI::App* ae = app.add_subcommand(
      "ahlswede-exact", "exact mixture-family exponent curve");
  add_input(ae);
  add_units(ae);
  add_delta(ae);
  ae->add_option("--nlambda", o.nlambda, "lambda grid size (default 10001)")
      ->check(CLI::Range(3, 10000000));

  rd->callback([&] { run_rd(o); });
  sweep->callback([&] { run_sweep(o); });
  gt->callback([&] { run_gtable(o); });
  mi->callback([&] { run_inverse(o, true); });
  bi->callback([&] { run_inverse(o, false); });
  ex->callback([&] { run_exponent(o); });
  ae->callback([&] { run_ahlswede_exact(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mek::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
