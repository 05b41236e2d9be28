#pragma once

#include <string>
#include <vector>

#include "mek/channel.hpp"
#include "mek/core.hpp"

namespace mek {

// n evenly spaced values from lo to hi inclusive.
Vec linspace(double lo, double hi, int n);

// Discretization of the (mu, nu) parameter quadrant plus the E-axis sample
// points. All axes are in nats where unit-bearing.
struct GridSpec {
  Vec mu_ticks;  // mu_0 = 0 < mu_1 < ... (the mu = 0 column is mandatory)
  Vec nu_ticks;  // nu_0 = 0 < nu_1 < ...
  Vec e_ticks;   // may be empty for table-only builds

  static GridSpec defaults();
};
void validate_grid(const GridSpec& spec);

// Result of one inner minimization min_{p_Y} G^(mu,nu)(p_Y | P).
struct GMinResult {
  Distribution p_y;
  double g = 0.0;      // nats
  int iterations = 0;  // solver iterations; simplex pivots on the LP path
  bool converged = true;
};

// G^(mu,nu)(p_Y | P) in nats. With A(x) = sum_y p_Y(y) e^{-nu d(x,y)}:
//   mu > 0:  mu * ln sum_x P(x) A(x)^{-1/mu}, evaluated in log space;
//   mu = 0:  -ln min over supp(P) of A(x).
double g_of_py(double mu, double nu, const Distribution& p_y,
               const Distribution& P, const DistortionMatrix& d);

// Fixed-point minimization of G^(1/rho,nu)(. | P). Stops once a convexity
// certificate bounds the objective above the minimum by at most eps; if
// max_itr is hit first, the last iterate comes back with converged = false.
// `warm_start` seeds the iteration (default uniform); `g_trace`, when given,
// receives the objective value after every iteration.
GMinResult arimoto_minimize(double rho, double nu, const Distribution& P,
                            const DistortionMatrix& d, double eps, int max_itr,
                            const Vec* warm_start = nullptr,
                            std::vector<double>* g_trace = nullptr);

// The mu = 0 branch as a linear program over (p_Y, c): maximize c subject
// to A(x) >= c on supp(P) and p_Y on the simplex; g = -ln c*. Always
// feasible (uniform p_Y with c = min_x A(x)).
GMinResult g_mu_zero(double nu, const Distribution& P,
                     const DistortionMatrix& d);

struct GTableOptions {
  int threads = 1;
  std::string provenance;
};

// Precomputed g(i,j) = min_{p_Y} G^(mu_i,nu_j)(p_Y | P) over the grid.
struct GTable {
  Mat g;  // (mu ticks) x (nu ticks), nats
  Eigen::MatrixXi iterations;
  Eigen::MatrixXi converged;  // 0/1 per cell
  GridSpec spec;
  std::string provenance;
  int nonconverged_cells = 0;

  Eigen::Index n_mu() const { return g.rows(); }
  Eigen::Index n_nu() const { return g.cols(); }
};

// Fills the table row by row: the mu = 0 row (and any mu below 1e-3, where
// rho = 1/mu would be impractical) through the LP, the rest through
// arimoto_minimize seeded with the neighboring (i, j-1) optimizer blended
// toward uniform. Rows are independent, so `threads` never changes the
// values.
GTable build_gtable(const Distribution& P, const DistortionMatrix& d,
                    const GridSpec& spec, double eps = 1e-10,
                    int max_itr = 20000, const GTableOptions& opt = {});

// CSV serialization (columns mu,nu,g_nats,iterations,converged, row-major).
void write_gtable_csv(const GTable& table, const std::string& path);
GTable read_gtable_csv(const std::string& path);

// Content hash of everything the cell values depend on.
std::string gtable_cache_key(const Distribution& P, const DistortionMatrix& d,
                             const GridSpec& spec, double eps, int max_itr);

// Reads `<cache_dir>/gtable-<key>.csv` when present and grid-compatible,
// otherwise builds the table and writes it there. An empty cache_dir builds
// unconditionally and writes nothing.
GTable load_or_build_gtable(const Distribution& P, const DistortionMatrix& d,
                            const GridSpec& spec, double eps, int max_itr,
                            const GTableOptions& opt = {},
                            const std::string& cache_dir = "");

}  // namespace mek
