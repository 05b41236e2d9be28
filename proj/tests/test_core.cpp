#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mek/ahlswede.hpp"
#include "mek/core.hpp"

using namespace mek;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Mat hamming2() {
  Mat d(2, 2);
  d << 0, 1, 1, 0;
  return d;
}

}  // namespace

TEST_CASE("validate_distribution accepts, renormalizes, flags zeros") {
  const Distribution u = validate_distribution(vec({0.5, 0.5}));
  CHECK(u.size() == 2);
  CHECK(!u.has_zero_mass);

  const Distribution z = validate_distribution(vec({0.5, 0.5, 0.0}));
  CHECK(z.has_zero_mass);

  // Renormalization within tolerance keeps the sum at exactly 1.
  const Distribution r = validate_distribution(vec({0.25, 0.75 + 4e-10}));
  CHECK(r.probs.sum() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(validate_distribution(vec({0.3, 0.8})), SumOutOfTolerance);
  CHECK_THROWS_AS(validate_distribution(vec({0.2, -0.1, 0.9})), NegativeEntry);
  CHECK_THROWS_AS(validate_distribution(Vec()), DomainError);
}

TEST_CASE("validate_distortion enforces nonnegativity and per-row zeros") {
  CHECK_NOTHROW(validate_distortion(hamming2()));

  Mat neg = hamming2();
  neg(0, 1) = -0.5;
  CHECK_THROWS_AS(validate_distortion(neg), NegativeEntry);

  Mat no_zero = hamming2();
  no_zero(1, 1) = 0.25;
  no_zero(1, 0) = 0.5;
  CHECK_THROWS_AS(validate_distortion(no_zero), DomainError);

  const DistortionMatrix d = validate_distortion(hamming2());
  CHECK(d.d_max() == 1.0);
}

TEST_CASE("kl_divergence: identity, support violation, known values") {
  const Distribution p = validate_distribution(vec({0.3, 0.7}));
  CHECK(kl_divergence(p, p).nats == doctest::Approx(0.0).epsilon(1e-15));

  const Distribution q = validate_distribution(vec({0.5, 0.5}));
  const Distribution spiked = validate_distribution(vec({1.0, 0.0}));
  CHECK(std::isinf(kl_divergence(q, spiked).nats));
  CHECK(kl_divergence(spiked, q).nats ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const Distribution p3 = validate_distribution(vec({0.2, 0.3, 0.5}));
  CHECK_THROWS_AS(kl_divergence(q, p3), AlphabetMismatch);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int k = 0; k < 50; ++k) {
    Vec a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a(i) = u(rng);
      b(i) = u(rng);
    }
    a /= a.sum();
    b /= b.sum();
    const double kl =
        kl_divergence(validate_distribution(a), validate_distribution(b)).nats;
    CHECK(kl >= -1e-15);
  }
}

TEST_CASE("binary_divergence matches the two-point relative entropy") {
  CHECK(binary_divergence(0.5, 0.5).nats == 0.0);
  CHECK(binary_divergence(0.0, 0.25).nats ==
        doctest::Approx(-std::log(0.75)).epsilon(1e-14));
  CHECK(binary_divergence(1.0, 0.25).nats ==
        doctest::Approx(-std::log(0.25)).epsilon(1e-14));

  CHECK(binary_divergence(0.0746, 0.01).nats ==
        doctest::Approx(0.08746789069727053).epsilon(1e-12));
  CHECK(binary_divergence(0.0746, 0.01).bits() ==
        doctest::Approx(0.126).epsilon(8e-3));
  // The printed 0.904 belongs to the unrounded crossing point 0.258455...;
  // the rounded 0.258 lands slightly below it.
  CHECK(binary_divergence(0.258, 0.01).bits() ==
        doctest::Approx(0.904).epsilon(5e-3));
  CHECK(binary_divergence(0.258455, 0.01).bits() ==
        doctest::Approx(0.9034839495218097).epsilon(1e-10));

  CHECK_THROWS_AS(binary_divergence(-0.1, 0.5), DomainError);
  CHECK_THROWS_AS(binary_divergence(1.1, 0.5), DomainError);
  CHECK_THROWS_AS(binary_divergence(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(binary_divergence(0.5, 1.0), DomainError);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double lam = u(rng);
    const double xi = 0.01 + 0.98 * u(rng);
    const Distribution ql = validate_distribution(vec({lam, 1.0 - lam}));
    const Distribution qx = validate_distribution(vec({xi, 1.0 - xi}));
    CHECK(binary_divergence(lam, xi).nats ==
          doctest::Approx(kl_divergence(ql, qx).nats).epsilon(1e-13));
  }
}

TEST_CASE("binary_entropy endpoints and values") {
  CHECK(binary_entropy(0.0).nats == 0.0);
  CHECK(binary_entropy(1.0).nats == 0.0);
  CHECK(binary_entropy(0.5).nats == doctest::Approx(kLn2).epsilon(1e-15));
  CHECK(binary_entropy(0.254).nats ==
        doctest::Approx(0.5666870774074232).epsilon(1e-13));
  CHECK_THROWS_AS(binary_entropy(-0.01), DomainError);
  CHECK_THROWS_AS(binary_entropy(1.01), DomainError);
}

TEST_CASE("delta_max: column minima") {
  const Distribution u2 = validate_distribution(vec({0.5, 0.5}));
  CHECK(delta_max(u2, validate_distortion(hamming2())) == 0.5);

  const DistortionMatrix zero = validate_distortion(Mat::Zero(2, 3));
  CHECK(delta_max(u2, zero) == 0.0);

  const AhlswedeInstance inst = build_instance(8, 512, 0.01, 10.0);
  CHECK(delta_max(inst.source(), inst.d) ==
        doctest::Approx(0.4362431041809792).epsilon(1e-12));

  // Permuting reproduction columns does not change the minimum.
  Mat d(2, 3);
  d << 0.0, 0.4, 1.0, 1.0, 0.4, 0.0;
  Mat perm(2, 3);
  perm << 1.0, 0.0, 0.4, 0.0, 1.0, 0.4;
  CHECK(delta_max(u2, validate_distortion(d)) ==
        delta_max(u2, validate_distortion(perm)));
}

TEST_CASE("mixture divergence collapses to the binary one") {
  const AhlswedeInstance inst = build_instance(4, 8, 0.3, 10.0);
  for (double lam : {0.0, 0.05, 0.3, 0.77, 1.0}) {
    const double kl =
        kl_divergence(q_lambda(inst, lam), inst.source()).nats;
    CHECK(kl == doctest::Approx(binary_divergence(lam, 0.3).nats)
                    .epsilon(1e-12));
  }
}

TEST_CASE("log_sum_exp is stable far outside double range") {
  CHECK(log_sum_exp(vec({-1000.0, -1000.0})) ==
        doctest::Approx(-1000.0 + kLn2).epsilon(1e-12));
  CHECK(log_sum_exp(vec({800.0, 800.0})) ==
        doctest::Approx(800.0 + kLn2).epsilon(1e-12));
  CHECK(log_sum_exp(vec({-kInf, 0.0})) == doctest::Approx(0.0));
  CHECK(log_sum_exp(vec({-kInf, -kInf})) == -kInf);
}

TEST_CASE("InfoValue converts exactly between units") {
  const InfoValue v(1.3862943611198906);
  CHECK(v.bits() * kLn2 == doctest::Approx(v.nats).epsilon(1e-15));
  CHECK(InfoValue::from_bits(1.0).nats == doctest::Approx(kLn2));
}
