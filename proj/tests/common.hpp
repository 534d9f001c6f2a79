#pragma once

#include "ladderops/verify.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

using namespace lop;

inline std::string fixture_path(const std::string& name) {
  return std::string(LADDEROPS_FIXTURE_DIR) + "/" + name + ".json";
}

inline WeightSpec fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  REQUIRE_MESSAGE(in.good(), "missing fixture " << name);
  std::stringstream ss;
  ss << in.rdbuf();
  return weight_from_json(ss.str());
}

inline double rel(const Real& a, const Real& b) {
  const Real m = std::max(Real(abs(a)), Real(abs(b)));
  return m > 0 ? static_cast<double>(abs(a - b) / m) : 0.0;
}

inline double rel(const Complex& a, const Complex& b) {
  const Real m = std::max(abs(a), abs(b));
  return m > 0 ? static_cast<double>(abs(a - b) / m) : 0.0;
}

inline double absd(const Real& a) { return static_cast<double>(abs(a)); }
inline double absd(const Complex& a) { return static_cast<double>(abs(a)); }

// Table and workspace built at the default 256 bits / 200 nodes.
struct Built {
  WeightSpec w;
  RecurrenceTable tab;
  Workspace ws;
};

inline Built build(const WeightSpec& w, int N, unsigned bits = 256, unsigned nodes = 200) {
  NumericOptions o;
  o.precision_bits = bits;
  o.quad.nodes = nodes;
  Built b{w, build_table(w, N, o), {}};
  b.ws = make_workspace(w, b.tab, o.quad);
  return b;
}

// Monomial coefficients (ascending) of P_n from the three-term recurrence.
inline std::vector<Real> coefficients(const RecurrenceTable& t, int n) {
  std::vector<Real> p0{Real(1)}, p1{-t.alpha[0], Real(1)};
  if (n == 0) return p0;
  for (int j = 1; j < n; ++j) {
    std::vector<Real> p2(j + 2, Real(0));
    for (int k = 0; k <= j; ++k) {
      p2[k + 1] += p1[k];
      p2[k] -= t.alpha[j] * p1[k];
    }
    for (int k = 0; k < j; ++k) p2[k] -= t.beta[j] * p0[k];
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return p1;
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
  bool thrown = false;
  try {
    f();
  } catch (const Error& e) {
    thrown = true;
    CHECK_MESSAGE(e.code() == code, "got " << std::string(error_name(e.code())) << ": " << e.what());
  }
  CHECK_MESSAGE(thrown, "expected " << std::string(error_name(code)));
}

}  // namespace testutil
