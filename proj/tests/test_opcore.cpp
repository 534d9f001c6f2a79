#include "common.hpp"
#include "oracle_values.hpp"

#include <random>

using namespace lop;
using testutil::rel;

TEST_CASE("moments of classical weights") {
  PrecisionScope ps(256);
  NumericOptions o;
  const auto mu_l = moments(build_rules(laguerre(0), quad_for_degree(o.quad, 8)), 6).mu;
  CHECK(rel(mu_l[3], Real(6)) < 1e-60);
  const auto mu_j = moments(build_rules(jacobi(0, 0), quad_for_degree(o.quad, 8)), 6).mu;
  CHECK(testutil::absd(mu_j[1]) < 1e-70);
  const auto mu_s = moments(build_rules(shifted_jacobi(0, 0), quad_for_degree(o.quad, 8)), 6).mu;
  for (int j = 0; j <= 6; ++j) CHECK(rel(mu_s[j], Real(1) / (j + 1)) < 1e-70);
}

TEST_CASE("Stieltjes table for classical Laguerre") {
  const auto b = testutil::build(laguerre(1.0), 6);
  PrecisionScope ps(256);
  CHECK(rel(b.tab.alpha[2], Real(6)) < 1e-60);
  CHECK(rel(b.tab.beta[2], Real(6)) < 1e-60);
  CHECK(rel(b.tab.h[2], Real(12)) < 1e-60);
  CHECK(b.tab.beta[0] == 0);
  CHECK(b.tab.p1[0] == 0);
}

TEST_CASE("table invariants") {
  for (const char* name : {"chen_mckay", "laguerre_two_jump", "shifted_jacobi_fh", "symmetric_exp_quad"}) {
    const auto b = testutil::build(testutil::fixture(name), 10);
    PrecisionScope ps(256);
    const auto& t = b.tab;
    for (int j = 0; j < t.N; ++j) {
      CHECK(t.h[j] > 0);
      CHECK(testutil::absd(t.p1[j + 1] - (t.p1[j] - t.alpha[j])) == 0);
      if (j > 0) {
        CHECK(t.beta[j] > 0);
        CHECK(rel(t.beta[j], t.h[j] / t.h[j - 1]) < 1e-70);
      }
    }
  }
}

TEST_CASE("frozen high-precision tables") {
  const std::map<std::string, std::array<const std::vector<const char*>*, 3>> cases = {
      {"chen_its", {&oracle::chen_its_alpha, &oracle::chen_its_beta, &oracle::chen_its_h}},
      {"jacobi_exp", {&oracle::jacobi_exp_alpha, &oracle::jacobi_exp_beta, &oracle::jacobi_exp_h}},
      {"symmetric_exp_quad",
       {&oracle::symmetric_exp_quad_alpha, &oracle::symmetric_exp_quad_beta, &oracle::symmetric_exp_quad_h}},
      {"shifted_jacobi_power",
       {&oracle::shifted_jacobi_power_alpha, &oracle::shifted_jacobi_power_beta, &oracle::shifted_jacobi_power_h}},
      {"pollaczek_jacobi",
       {&oracle::pollaczek_jacobi_alpha, &oracle::pollaczek_jacobi_beta, &oracle::pollaczek_jacobi_h}},
      {"laguerre_fh", {&oracle::laguerre_fh_alpha, &oracle::laguerre_fh_beta, &oracle::laguerre_fh_h}},
      {"laguerre_two_jump",
       {&oracle::laguerre_two_jump_alpha, &oracle::laguerre_two_jump_beta, &oracle::laguerre_two_jump_h}},
  };
  for (const auto& [name, cols] : cases) {
    const auto b = testutil::build(testutil::fixture(name), 6);
    PrecisionScope ps(256);
    for (int n = 0; n <= 4; ++n) {
      const Real a((*cols[0])[n]);
      CHECK_MESSAGE(testutil::absd(b.tab.alpha[n] - a) / std::max(1.0, testutil::absd(a)) < 1e-20,
                    name << " alpha " << n);
      if (n > 0) CHECK_MESSAGE(rel(b.tab.beta[n], Real((*cols[1])[n])) < 1e-20, name << " beta " << n);
      CHECK_MESSAGE(rel(b.tab.h[n], Real((*cols[2])[n])) < 1e-20, name << " h " << n);
    }
  }
}

TEST_CASE("moment oracle agrees with Stieltjes") {
  for (const char* name : {"laguerre_classical", "chen_mckay", "chen_its", "laguerre_two_jump", "laguerre_fh",
                           "jacobi_classical", "jacobi_exp", "symmetric_exp_quad", "pollaczek_jacobi",
                           "shifted_jacobi_power"}) {
    const WeightSpec w = testutil::fixture(name);
    const auto b = testutil::build(w, 10);
    PrecisionScope ps(256);
    NumericOptions o;
    const auto m = moments(build_rules(w, quad_for_degree(o.quad, 20)), 20);
    const auto orc = recurrence_moment_oracle(m, 9, w);
    double worst = 0;
    for (int n = 0; n <= 8; ++n) {
      // Unit floor on alpha and p: symmetric weights have them at zero.
      worst = std::max({worst, rel(b.tab.h[n], orc.h[n]),
                        testutil::absd(b.tab.alpha[n] - orc.alpha[n]) /
                            std::max(1.0, testutil::absd(orc.alpha[n])),
                        testutil::absd(b.tab.p1[n] - orc.p1[n]) / std::max(1.0, testutil::absd(orc.p1[n]))});
      if (n > 0) worst = std::max(worst, rel(b.tab.beta[n], orc.beta[n]));
    }
    CHECK_MESSAGE(worst <= 1e-15, name << " " << worst);
  }
}

TEST_CASE("moment oracle examples") {
  PrecisionScope ps(256);
  NumericOptions o;
  const WeightSpec l0 = laguerre(0);
  const auto orc = recurrence_moment_oracle(moments(build_rules(l0, quad_for_degree(o.quad, 10)), 8), 4, l0);
  const Real want[] = {1, 1, 4, 36};
  for (int n = 0; n < 4; ++n) CHECK(rel(orc.h[n], want[n]) < 1e-50);
  CHECK(orc.beta[0] == 0);

  const WeightSpec j10 = jacobi(1, 0);
  const auto oj = recurrence_moment_oracle(moments(build_rules(j10, quad_for_degree(o.quad, 10)), 6), 3, j10);
  CHECK(rel(oj.p1[2], Real(2) / 5) < 1e-50);

  const auto cm = testutil::build(testutil::fixture("chen_mckay"), 8);
  PrecisionScope ps2(256);
  const auto oc = recurrence_moment_oracle(
      moments(build_rules(cm.w, quad_for_degree(o.quad, 16)), 14), 7, cm.w);
  for (int n = 0; n <= 6; ++n) {
    CHECK(rel(cm.tab.alpha[n], oc.alpha[n]) < 1e-20);
    CHECK(rel(cm.tab.h[n], oc.h[n]) < 1e-20);
  }
}

TEST_CASE("eval_monic") {
  const auto b = testutil::build(laguerre(0.7), 5);
  PrecisionScope ps(256);
  const Real L(0.7), x("1.3");
  auto [p1, d1] = eval_monic(b.tab, 1, x);
  CHECK(testutil::absd(p1 - (x - (L + 1))) < 1e-60);
  CHECK(testutil::absd(d1 - 1) < 1e-70);
  auto [p2, d2] = eval_monic(b.tab, 2, x);
  CHECK(testutil::absd(p2 - (x * x - 2 * (L + 2) * x + (L + 1) * (L + 2))) < 1e-60);
  CHECK(testutil::absd(d2 - (2 * x - 2 * (L + 2))) < 1e-60);
  auto [p0, d0] = eval_monic(b.tab, 0, Complex(2.0, 3.0));
  CHECK(testutil::absd(p0 - Complex(1)) == 0);
  CHECK(testutil::absd(d0) == 0);
  testutil::expect_error(ErrorCode::DegreeOutOfRange, [&] { eval_monic(b.tab, 7, x); });
}

TEST_CASE("monic leading coefficient") {
  const auto b = testutil::build(testutil::fixture("jacobi_exp"), 8);
  PrecisionScope ps(256);
  for (int n = 1; n <= 7; ++n) {
    // n-th divided difference on n+1 points equals the leading coefficient.
    std::vector<Real> xs, f;
    for (int k = 0; k <= n; ++k) {
      xs.push_back(Real(k) / 3 - 1);
      f.push_back(eval_monic(b.tab, n, xs.back()).first);
    }
    for (int lvl = 1; lvl <= n; ++lvl)
      for (int k = n; k >= lvl; --k) f[k] = (f[k] - f[k - 1]) / (xs[k] - xs[k - lvl]);
    CHECK(rel(f[n], Real(1)) < 1e-50);
  }
}

TEST_CASE("Hankel determinants") {
  const auto b = testutil::build(laguerre(0), 5);
  PrecisionScope ps(256);
  const auto D = hankel_dets(b.tab);
  CHECK(rel(D[0], b.tab.h[0]) < 1e-70);
  CHECK(rel(D[2], Real(4)) < 1e-60);

  const auto bh = testutil::build(laguerre(0.5), 4);
  PrecisionScope ps2(256);
  const Real sp = sqrt(pi());
  const Real want = (sp / 2) * (3 * sp / 4);
  CHECK(rel(hankel_dets(bh.tab)[1], want) < 1e-60);
  NumericOptions o;
  const auto mu = moments(build_rules(bh.w, quad_for_degree(o.quad, 4)), 2).mu;
  CHECK(rel(determinant({{mu[0], mu[1]}, {mu[1], mu[2]}}), want) < 1e-50);
}

TEST_CASE("determinant") {
  PrecisionScope ps(256);
  CHECK(testutil::absd(determinant({{Real(0), Real(2)}, {Real(3), Real(4)}}) + 6) < 1e-70);
  CHECK(testutil::absd(determinant({{Real(1), Real(2)}, {Real(2), Real(4)}})) < 1e-70);
}

TEST_CASE("Christoffel-Darboux kernel") {
  const auto b = testutil::build(laguerre(0), 5);
  PrecisionScope ps(256);
  const auto k1 = cd_kernel(b.tab, 1, Real("0.3"), Real("2.9"));
  CHECK(rel(k1.sum, Real(1) / b.tab.h[0]) < 1e-70);
  CHECK(rel(k1.closed, Real(1) / b.tab.h[0]) < 1e-60);
  const auto k2 = cd_kernel(b.tab, 2, Real(0), Real(1));
  CHECK(rel(k2.sum, Real(1)) < 1e-60);
  CHECK(rel(k2.closed, Real(1)) < 1e-60);

  const auto bj = testutil::build(testutil::fixture("pollaczek_jacobi"), 10);
  PrecisionScope ps2(256);
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const Real x(u(g)), y(u(g));
    if (abs(x - y) < 1e-3) continue;
    const auto c = cd_kernel(bj.tab, 8, x, y);
    worst = std::max(worst, rel(c.sum, c.closed));
    CHECK(rel(c.sum, cd_kernel(bj.tab, 8, y, x).sum) < 1e-70);
  }
  // The closed form divides by x - y; allow for that cancellation.
  CHECK(worst <= 1e5 * std::ldexp(1e3, 1 - 256));
  testutil::expect_error(ErrorCode::DegreeOutOfRange, [&] { cd_kernel(bj.tab, 0, Real(0), Real(1)); });
}

TEST_CASE("orthogonality residual") {
  for (const char* name : {"laguerre_classical", "laguerre_fh", "shifted_jacobi_fh", "chen_its"}) {
    const auto b = testutil::build(testutil::fixture(name), 12);
    PrecisionScope ps(256);
    NumericOptions o;
    const Rules r = build_rules(b.w, quad_for_degree(o.quad, 12));
    CHECK_MESSAGE(orthogonality_residual(b.tab, r) <= 1e6 * std::ldexp(1.0, 1 - 256), name);
  }
}

TEST_CASE("precision scope") {
  {
    // The mantissa is rounded up to the backend's decimal granularity.
    PrecisionScope a(128);
    const unsigned b128 = current_precision_bits();
    CHECK(b128 >= 128);
    CHECK(b128 < 140);
    {
      PrecisionScope b(512);
      CHECK(current_precision_bits() >= 512);
    }
    CHECK(current_precision_bits() == b128);
    CHECK(eps_work() == ldexp(Real(1), 1 - static_cast<int>(b128)));
  }
  const auto b = testutil::build(laguerre(0), 4, 128);
  CHECK(b.tab.precision_bits >= 128);
}
