#include "common.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

using namespace lop;
using testutil::rel;

namespace {

Rules rules_for(const WeightSpec& w, unsigned nodes) {
  QuadOptions q;
  q.nodes = nodes;
  return build_rules(w, q);
}

Real one(const Real&) { return Real(1); }

}  // namespace

TEST_CASE("gauss_jacobi is exact for low degree") {
  PrecisionScope ps(256);
  for (auto [a, b] : {std::pair{-0.5, -0.5}, {0.0, 0.0}, {-0.9, 0.4}, {1.3, -0.2}}) {
    const Real A(a), B(b);
    const GaussRule g = gauss_jacobi(12, A, B);
    REQUIRE(g.x.size() == 12);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      CHECK(g.w[i] > 0);
      CHECK(abs(g.x[i]) < 1);
    }
    // int (1-u)^a (1+u)^b ((1+u)/2)^k du = 2^{a+b+1} B(a+1, b+k+1)
    for (int k = 0; k <= 5; ++k) {
      Real s(0);
      for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * pow((1 + g.x[i]) / 2, k);
      const Real want = pow(Real(2), A + B + 1) * boost::math::beta(A + 1, B + k + 1);
      CHECK_MESSAGE(rel(s, want) < 1e-70, "a=" << a << " b=" << b << " k=" << k);
    }
  }
}

TEST_CASE("rule structure") {
  PrecisionScope ps(256);
  for (const char* name : {"laguerre_classical", "laguerre_two_jump", "laguerre_fh", "jacobi_exp",
                           "shifted_jacobi_fh", "pollaczek_jacobi"}) {
    const WeightSpec w = testutil::fixture(name);
    const Rules r = rules_for(w, 30);
    CHECK(node_count(r) >= 30);
    for (const auto& seg : r) {
      CHECK(seg.lo < seg.hi);
      for (std::size_t i = 0; i < seg.nodes.size(); ++i) {
        CHECK(seg.nodes[i] > seg.lo);
        CHECK(seg.nodes[i] < seg.hi);
        CHECK(seg.weights[i] > 0);
      }
    }
  }
  testutil::expect_error(ErrorCode::BadNodeCount, [] { rules_for(laguerre(0), 1); });
}

TEST_CASE("splits at jump and FH points") {
  PrecisionScope ps(256);
  auto has_break = [](const Rules& r, double t) {
    for (const auto& s : r)
      if (s.hi == Real(t) || s.lo == Real(t)) return true;
    return false;
  };
  const Rules j = rules_for(testutil::fixture("laguerre_two_jump"), 20);
  CHECK(has_break(j, 0.5));
  CHECK(has_break(j, 2.0));
  const Rules f = rules_for(testutil::fixture("shifted_jacobi_fh"), 20);
  CHECK(has_break(f, 0.5));
}

TEST_CASE("integrals of the constant") {
  PrecisionScope ps(256);
  CHECK(rel(integrate(rules_for(laguerre(-0.5), 40), one), sqrt(pi())) < 1e-30);
  CHECK(rel(integrate(rules_for(jacobi(0, 0), 20), one), Real(2)) < 1e-70);
  CHECK(rel(integrate(rules_for(shifted_jacobi(-0.5, -0.5), 20), one), pi()) < 1e-70);
}

TEST_CASE("Laguerre polynomial integrands") {
  PrecisionScope ps(256);
  for (double lam : {-0.5, 0.0, 1.7}) {
    const Rules r = rules_for(laguerre(lam), 60);
    const Real got = integrate(r, [](const Real& x) { return x; });
    CHECK(rel(got, boost::math::tgamma(Real(lam) + 2)) < 1e-40);
  }
  const Rules r0 = rules_for(laguerre(0), 60);
  CHECK(rel(integrate(r0, [](const Real& x) { return (x - 1) * (x - 1); }), Real(1)) < 1e-40);
}

TEST_CASE("step factor restricts the integral") {
  PrecisionScope ps(256);
  WeightSpec w = laguerre(0);
  w.jumps.omega0 = 0;
  w.jumps.points = {{1.0, 1.0}, {2.0, -1.0}};
  w = make_weight(w);
  const Real got = integrate(rules_for(w, 40), one);
  CHECK(rel(got, exp(Real(-1)) - exp(Real(-2))) < std::ldexp(1e3, 1 - 256));

  // Incomplete gamma for a singular endpoint exponent.
  const WeightSpec j = testutil::fixture("laguerre_two_jump");
  const Real half("0.5");
  const Real want = boost::math::tgamma_lower(half, Real(2)) - boost::math::tgamma_lower(half, half);
  CHECK(rel(integrate(rules_for(j, 200), one), want) < std::ldexp(1e3, 1 - 256));
}

TEST_CASE("doubling the node count changes little") {
  PrecisionScope ps(256);
  for (const char* name : {"chen_mckay", "chen_its", "jacobi_exp", "shifted_jacobi_power", "laguerre_fh"}) {
    const WeightSpec w = testutil::fixture(name);
    auto f = [](const Real& x) { return x * x * x - x + 1; };
    const Real a = integrate(rules_for(w, 100), f);
    const Real b = integrate(rules_for(w, 200), f);
    CHECK_MESSAGE(rel(a, b) < 1e-40, name);
  }
}

TEST_CASE("atom order does not change the rules") {
  PrecisionScope ps(256);
  WeightSpec a = laguerre(-0.5, {DeformationAtom::power_shift(1.0, 1.0), DeformationAtom::exp_inv_x(0.3)});
  WeightSpec b = a;
  std::reverse(b.atoms.begin(), b.atoms.end());
  b = make_weight(b);
  const Rules ra = rules_for(a, 30), rb = rules_for(b, 30);
  REQUIRE(ra.size() == rb.size());
  Real worst(0);
  for (std::size_t s = 0; s < ra.size(); ++s)
    for (std::size_t i = 0; i < ra[s].weights.size(); ++i)
      worst = std::max(worst, Real(abs(ra[s].weights[i] - rb[s].weights[i]) / ra[s].weights[i]));
  CHECK(worst < 1e-70);
}

TEST_CASE("Laguerre truncation grows with degree") {
  const WeightSpec w = laguerre(-0.5);
  const double t8 = laguerre_truncation(w, 8, 256), t64 = laguerre_truncation(w, 64, 256);
  CHECK(t8 >= 64);
  CHECK(t64 >= t8);
}

TEST_CASE("measure shift divides by the endpoint distance") {
  PrecisionScope ps(256);
  // x^{0.5} e^{-x} / x integrates to Gamma(0.5).
  QuadOptions q;
  q.nodes = 60;
  MeasureShift m;
  m.left = true;
  const Rules r = build_rules(laguerre(0.5), q, m);
  CHECK(rel(integrate(r, one), sqrt(pi())) < 1e-40);
}
