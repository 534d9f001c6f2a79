#include "ladderops/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

namespace lop {

using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

namespace {

struct CheckLabel {
  Check c;
  const char* name;
};

constexpr CheckLabel kChecks[] = {
    {Check::Orthogonality, "orthogonality"}, {Check::Ladder, "ladder"},
    {Check::Compat, "compat"},               {Check::Rhp, "rhp"},
    {Check::Oracle, "oracle"},               {Check::DiffT, "diff_t"},
    {Check::KernelOracle, "kernel_oracle"},
};

bool wants(const Campaign& c, Check k) {
  return std::find(c.checks.begin(), c.checks.end(), k) != c.checks.end();
}

// One residual observation; merged in (z index, emission order).
struct Entry {
  std::string name;
  double value;
  int n;
  std::optional<std::complex<double>> z;
};

double to_double(const Real& r) { return static_cast<double>(r); }

Real rel(const Complex& a, const Complex& b, const Real& floor) {
  const Real m = std::max({abs(a), abs(b), floor});
  const Real d = abs(a - b);
  return m > 0 ? Real(d / m) : d;
}

std::string strip_code(const std::string& what) {
  const auto p = what.find(": ");
  return p == std::string::npos ? what : what.substr(p + 2);
}

[[noreturn]] void rethrow_with(const Error& e, const std::string& check, int n,
                               std::optional<std::complex<double>> z) {
  std::ostringstream os;
  os << "check " << check;
  if (n >= 0) os << ", n=" << n;
  if (z) os << ", z=(" << z->real() << "," << z->imag() << ")";
  os << ": " << strip_code(e.what());
  throw Error(e.code(), os.str());
}

// Uniform double in [0,1) independent of the standard library's distributions.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

std::pair<double, double> sample_hull(const WeightSpec& w) {
  switch (w.family) {
    case Family::Laguerre: return {0.0, 4.0};
    case Family::Jacobi: return {-1.0, 1.0};
    case Family::ShiftedJacobi: return {0.0, 1.0};
  }
  return {0.0, 1.0};
}

std::vector<Entry> per_z(const Campaign& c, const Workspace& ws, std::complex<double> zd) {
  std::vector<Entry> out;
  const Complex z(zd.real(), zd.imag());
  const int n_max = c.n_max;
  const WeightSpec& w = ws.weight;
  auto push = [&](const char* name, int n, const Real& v) { out.push_back({name, to_double(v), n, zd}); };

  if (wants(c, Check::Ladder) || wants(c, Check::Compat)) {
    std::vector<LadderPair> seq;
    try {
      seq = ladder_sequence(ws, z, n_max + 1);
    } catch (const Error& e) {
      rethrow_with(e, "ladder", -1, zd);
    }
    if (wants(c, Check::Ladder)) {
      const auto r = ladder_residuals(ws, seq, z, n_max);
      for (int n = 1; n <= n_max; ++n) {
        push("ladder.lowering", n, r.lowering[n]);
        push("ladder.raising", n, r.raising[n]);
      }
    }
    if (wants(c, Check::Compat)) {
      for (int n = 0; n <= n_max; ++n) {
        const auto r = compat_from_sequence(ws, seq, z, n);
        push("compat.s1", n, r.s1);
        push("compat.s2", n, r.s2);
        if (n >= 1) push("compat.s2p", n, r.s2p);
      }
    }
  }

  if (wants(c, Check::Rhp)) {
    const bool smooth = is_smooth(w);
    for (int n = 1; n <= n_max; ++n) {
      try {
        const RhpFrame f = y_frame(ws, n, z);
        push("rhp.det", n, det_residual(f));
        push("rhp.trace", n, trace_residual(f));
        push("rhp.commute", n, cauchy_commutes_worst(ws, n, z));
        if (smooth) {
          const Mat2 R = r_closed(ws, n, z);
          Real r(0);
          for (const auto& row : r_elements_residual(f, R))
            for (const auto& v : row) r = std::max(r, v);
          push("rhp.r_elements", n, r);
          push("rhp.ladder_from_r", n, ladder_from_r_residual(ws, R, n, z));
        }
      } catch (const Error& e) {
        rethrow_with(e, "rhp", n, zd);
      }
    }
  }
  return out;
}

std::vector<Entry> global_checks(const Campaign& c, const Workspace& ws, const NumericOptions& o) {
  std::vector<Entry> out;
  const WeightSpec& w = ws.weight;
  const RecurrenceTable& tab = ws.table;
  const auto example = detect_example(w);
  auto push = [&](const std::string& name, int n, const Real& v,
                  std::optional<std::complex<double>> z = std::nullopt) {
    out.push_back({name, to_double(v), n, z});
  };

  if (wants(c, Check::Orthogonality)) {
    const NodeSet& s = ws.nodes;
    Real worst(0);
    int at = -1;
    for (int i = 0; i < tab.N; ++i)
      for (int j = i; j < tab.N; ++j) {
        Real ip(0);
        for (std::size_t k = 0; k < s.x.size(); ++k) ip += s.W[k] * s.P[i][k] * s.P[j][k];
        const Real r = i == j ? Real(abs(ip / tab.h[i] - 1)) : Real(abs(ip) / sqrt(tab.h[i] * tab.h[j]));
        if (r > worst) {
          worst = r;
          at = j;
        }
      }
    push("orthogonality", at, worst);
  }

  if (wants(c, Check::Oracle)) {
    try {
      const int Nm = std::min(tab.N, 9);
      const Rules rules = build_rules(w, quad_for_degree(o.quad, tab.N));
      const RecurrenceTable m = recurrence_moment_oracle(moments(rules, 2 * Nm - 1), Nm, w);
      Real worst(0);
      int at = -1;
      // alpha can vanish by symmetry, so it is compared against a unit floor.
      auto upd = [&](const Real& a, const Real& b, int n, double floor = 1e-300) {
        const Real r = abs(a - b) / std::max({Real(abs(a)), Real(abs(b)), Real(floor)});
        if (r > worst) {
          worst = r;
          at = n;
        }
      };
      for (int n = 0; n < Nm; ++n) {
        upd(tab.alpha[n], m.alpha[n], n, 1.0);
        if (n > 0) upd(tab.beta[n], m.beta[n], n);
        upd(tab.h[n], m.h[n], n);
      }
      if (example == Example::LaguerreClassical || example == Example::JacobiClassical) {
        for (int n = 0; n < tab.N; ++n) {
          const ClassicalValues v = example == Example::LaguerreClassical
                                        ? laguerre_classical(n, Real(w.lambda))
                                        : jacobi_classical(n, Real(w.alpha), Real(w.beta));
          upd(tab.alpha[n], v.alpha, n, 1.0);
          if (n > 0) upd(tab.beta[n], v.beta, n);
          upd(tab.h[n], v.h, n);
        }
      }
      push("oracle", at, worst);
    } catch (const Error& e) {
      rethrow_with(e, "oracle", -1, std::nullopt);
    }
  }

  if (wants(c, Check::KernelOracle) && example) {
    std::mt19937_64 g(c.seed ^ 0x6b65726e656cULL);
    const auto [lo, hi] = sample_hull(w);
    const auto poles = pole_points(w);
    Real worst(0);
    std::optional<std::complex<double>> at;
    int done = 0;
    for (int tries = 0; done < 50 && tries < 5000; ++tries) {
      const std::complex<double> zd = c.z_samples[done % c.z_samples.size()];
      const double xd = lo + (hi - lo) * (0.01 + 0.98 * unit(g));
      bool near = false;
      for (double p : poles)
        if (std::abs(xd - p) < 0.05) near = true;
      if (near) continue;
      const Complex z(zd.real(), zd.imag());
      const Real x(xd);
      try {
        const Real r = rel(named_kernel(*example, w, z, x), kernel_divdiff(w, z, x), Real(1));
        if (r > worst || !at) {
          worst = r;
          at = zd;
        }
      } catch (const Error& e) {
        rethrow_with(e, "kernel_oracle", -1, zd);
      }
      ++done;
    }
    push("kernel_oracle", -1, worst, at);
  }

  if (wants(c, Check::DiffT) && example &&
      (*example == Example::SymmetricExpQuad || *example == Example::ShiftedJacobiPower ||
       *example == Example::ShiftedJacobiFH)) {
    DiffOptions d;
    d.numeric = o;
    try {
      for (const auto& r : diff_identity_residuals(w, c.n_max, d)) push("diff_t." + r.name, r.n, r.residual);
    } catch (const Error& e) {
      rethrow_with(e, "diff_t", -1, std::nullopt);
    }
  }

  if (wants(c, Check::Rhp)) {
    const int n = std::min(3, c.n_max);
    const double x = default_jump_point(w);
    try {
      push("rhp.plemelj", n, plemelj_residual(w, tab, o.quad, n, x, 1e-8), std::complex<double>(x, 0));
    } catch (const Error& e) {
      rethrow_with(e, "rhp.plemelj", n, std::complex<double>(x, 0));
    }
  }
  return out;
}

Convergence convergence_evidence(const Campaign& c, const Workspace& ws, const NumericOptions& o) {
  Convergence cv;
  cv.m = o.quad.nodes;
  cv.m2 = 2 * o.quad.nodes;
  NumericOptions o2 = o;
  o2.quad.nodes = cv.m2;
  const RecurrenceTable t2 = build_table(ws.weight, ws.table.N, o2);
  const RecurrenceTable& t1 = ws.table;
  Real worst(0);
  auto upd = [&](const Real& a, const Real& b) {
    const Real m = std::max(Real(abs(a)), Real(abs(b)));
    if (m > 0) worst = std::max(worst, Real(abs(a - b) / m));
  };
  for (int n = 0; n < t1.N; ++n) {
    upd(t1.alpha[n], t2.alpha[n]);
    upd(t1.beta[n], t2.beta[n]);
    upd(t1.h[n], t2.h[n]);
  }
  cv.table_delta = to_double(worst);
  if (!c.z_samples.empty() && (wants(c, Check::Ladder) || wants(c, Check::Compat))) {
    const Workspace ws2 = make_workspace(ws.weight, t2, o2.quad);
    const Complex z(c.z_samples[0].real(), c.z_samples[0].imag());
    const auto s1 = ladder_sequence(ws, z, c.n_max);
    const auto s2 = ladder_sequence(ws2, z, c.n_max);
    Real lw(0);
    for (int n = 0; n <= c.n_max; ++n) {
      lw = std::max(lw, rel(s1[n].A, s2[n].A, Real(0)));
      lw = std::max(lw, rel(s1[n].B, s2[n].B, Real(0)));
    }
    cv.ladder_delta = to_double(lw);
  }
  return cv;
}

void merge(std::map<std::string, CheckResult>& res, const std::vector<Entry>& es) {
  for (const auto& e : es) {
    auto [it, fresh] = res.try_emplace(e.name);
    CheckResult& r = it->second;
    if (fresh || (!std::isnan(r.worst) && (std::isnan(e.value) || e.value > r.worst))) {
      r.worst = e.value;
      r.at.n = e.n;
      r.at.z = e.z;
    }
  }
}

}  // namespace

const char* check_name(Check c) {
  for (const auto& l : kChecks)
    if (l.c == c) return l.name;
  return "?";
}

std::optional<Check> check_from_name(const std::string& s) {
  for (const auto& l : kChecks)
    if (s == l.name) return l.c;
  return std::nullopt;
}

std::vector<Check> all_checks() {
  std::vector<Check> v;
  for (const auto& l : kChecks) v.push_back(l.c);
  return v;
}

double default_tolerance(const std::string& sub, const WeightSpec& w, unsigned bits) {
  if (sub == "rhp.plemelj") return 1e-4;
  if (sub.rfind("diff_t.", 0) == 0) return w.fh ? 1e-8 : 1e-10;
  if (sub == "kernel_oracle") return std::ldexp(1e3, 1 - static_cast<int>(bits));
  return 1e-15;
}

double tolerance_for(const Campaign& c, const std::string& sub) {
  if (auto it = c.tolerances.find(sub); it != c.tolerances.end()) return it->second;
  const auto dot = sub.find('.');
  if (dot != std::string::npos)
    if (auto it = c.tolerances.find(sub.substr(0, dot)); it != c.tolerances.end()) return it->second;
  return default_tolerance(sub, c.weight, c.precision_bits);
}

double default_jump_point(const WeightSpec& w) {
  double x = w.family == Family::Laguerre ? 1.5 : 0.3;
  for (int tries = 0; tries < 8; ++tries) {
    bool clash = false;
    for (double p : pole_points(w))
      if (std::abs(x - p) < 0.1) clash = true;
    if (!clash) break;
    x += w.family == Family::Laguerre ? 0.37 : 0.07;
  }
  return x;
}

void check_z_sample(const WeightSpec& w, std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::BadConfig, "z sample is not finite");
  if (on_closed_support(w, Complex(z.real(), z.imag())))
    throw Error(ErrorCode::ZOnSupport, "z sample lies on the support");
  for (double p : pole_points(w))
    if (std::abs(z - std::complex<double>(p, 0)) < 0.1)
      throw Error(ErrorCode::SingularPoint, "z sample within 0.1 of a pole");
}

std::vector<std::complex<double>> default_z_samples(const WeightSpec& w, int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::BadConfig, "sample count must be >= 1");
  std::mt19937_64 g(seed);
  const auto [lo, hi] = sample_hull(w);
  const double mid = (lo + hi) / 2, half = (hi - lo) / 2;
  const int n_complex = (count + 1) / 2;
  std::vector<std::complex<double>> out;
  auto admissible = [&](std::complex<double> z) {
    try {
      check_z_sample(w, z);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  while (static_cast<int>(out.size()) < count) {
    std::complex<double> z;
    if (static_cast<int>(out.size()) < n_complex) {
      const double re = mid + 2 * half * (2 * unit(g) - 1);
      const double im = (0.5 + 2.5 * unit(g)) * (unit(g) < 0.5 ? -1 : 1);
      z = {re, im};
    } else {
      const double u = unit(g), side = unit(g);
      switch (w.family) {
        case Family::Laguerre: z = {-(0.5 + 2.5 * u), 0}; break;
        case Family::Jacobi: z = {(side < 0.5 ? -1 : 1) * (1.5 + 1.5 * u), 0}; break;
        case Family::ShiftedJacobi: z = {side < 0.5 ? -(0.5 + 1.5 * u) : 1.5 + 1.5 * u, 0}; break;
      }
    }
    if (admissible(z)) out.push_back(z);
  }
  return out;
}

Report run_campaign(const Campaign& c) {
  const auto t0 = std::chrono::steady_clock::now();
  if (c.n_max < 1) throw Error(ErrorCode::DegreeOutOfRange, "n_max must be >= 1");
  if (c.precision_bits < 64) throw Error(ErrorCode::BadConfig, "precision must be at least 64 bits");
  if (c.nodes < 2) throw Error(ErrorCode::BadNodeCount, "need at least 2 nodes per segment");
  if (c.threads < 1) throw Error(ErrorCode::BadConfig, "threads must be >= 1");
  const bool needs_z = wants(c, Check::Ladder) || wants(c, Check::Compat) || wants(c, Check::Rhp) ||
                       wants(c, Check::KernelOracle);
  if (needs_z && c.z_samples.empty()) throw Error(ErrorCode::BadConfig, "campaign has no z samples");
  for (const auto& z : c.z_samples) check_z_sample(c.weight, z);
  for (const auto& [k, v] : c.tolerances)
    if (!(v > 0)) throw Error(ErrorCode::BadConfig, "tolerance for " + k + " must be positive");

  PrecisionScope scope(c.precision_bits);
  NumericOptions o;
  o.precision_bits = c.precision_bits;
  o.quad.nodes = c.nodes;
  const int N = c.n_max + 2;
  RecurrenceTable tab = build_table(c.weight, N, o);
  if (c.perturbation) {
    const int k = c.perturbation->k;
    if (k < 1 || k >= tab.N) throw Error(ErrorCode::DegreeOutOfRange, "perturbed index outside the table");
    tab.beta[k] *= Real(1) + Real(c.perturbation->rel);
  }
  const Workspace ws = make_workspace(c.weight, tab, o.quad);

  const std::size_t nz = c.z_samples.size();
  std::vector<std::vector<Entry>> per(nz);
  std::vector<std::exception_ptr> errs(nz);
  if (wants(c, Check::Ladder) || wants(c, Check::Compat) || wants(c, Check::Rhp)) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      PrecisionScope s(c.precision_bits);
      for (std::size_t i; (i = next.fetch_add(1)) < nz;) {
        try {
          per[i] = per_z(c, ws, c.z_samples[i]);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    };
    const unsigned nt = std::min<unsigned>(c.threads, static_cast<unsigned>(nz));
    if (nt <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  Report r;
  r.campaign = c;
  const auto globals = global_checks(c, ws, o);
  merge(r.results, globals);
  for (const auto& es : per) merge(r.results, es);
  for (auto& [name, res] : r.results) {
    res.tolerance = tolerance_for(c, name);
    res.pass = std::isfinite(res.worst) && res.worst <= res.tolerance;
    r.pass = r.pass && res.pass;
  }
  if (c.convergence) r.convergence = convergence_evidence(c, ws, o);
  r.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string report_to_json(const Report& r, bool include_timing) {
  using nlohmann::ordered_json;
  const Campaign& c = r.campaign;
  ordered_json camp;
  camp["weight"] = ordered_json::parse(weight_to_json(c.weight));
  camp["n_max"] = c.n_max;
  ordered_json zs = ordered_json::array();
  for (const auto& z : c.z_samples) zs.push_back({z.real(), z.imag()});
  camp["z_samples"] = zs;
  ordered_json checks = ordered_json::array();
  for (Check k : c.checks) checks.push_back(check_name(k));
  camp["checks"] = checks;
  camp["precision_bits"] = c.precision_bits;
  camp["nodes"] = c.nodes;
  camp["seed"] = c.seed;
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  camp["tolerance_overrides"] = tol;
  if (c.perturbation) camp["perturbation"] = {{"beta_index", c.perturbation->k}, {"relative", c.perturbation->rel}};

  ordered_json res = ordered_json::object();
  for (const auto& [name, cr] : r.results) {
    ordered_json at;
    at["n"] = cr.at.n < 0 ? ordered_json(nullptr) : ordered_json(cr.at.n);
    at["z"] = cr.at.z ? ordered_json{cr.at.z->real(), cr.at.z->imag()} : ordered_json(nullptr);
    res[name] = {{"worst", cr.worst}, {"at", at}, {"tolerance", cr.tolerance}, {"pass", cr.pass}};
  }

  ordered_json j;
  j["campaign"] = camp;
  j["results"] = res;
  if (r.convergence)
    j["convergence"] = {{"m", r.convergence->m},
                        {"m2", r.convergence->m2},
                        {"table_delta", r.convergence->table_delta},
                        {"ladder_delta", r.convergence->ladder_delta}};
  else
    j["convergence"] = nullptr;
  j["pass"] = r.pass;
  ordered_json meta;
  meta["precision_bits"] = c.precision_bits;
  meta["nodes"] = c.nodes;
  meta["seed"] = c.seed;
  if (include_timing) meta["duration_ms"] = r.duration_ms;
  j["meta"] = meta;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& r) {
  std::string out = "check,worst,tolerance,pass,n,z_re,z_im\n";
  char buf[256];
  for (const auto& [name, cr] : r.results) {
    std::snprintf(buf, sizeof buf, "%s,%.17e,%.17e,%d,", name.c_str(), cr.worst, cr.tolerance, cr.pass ? 1 : 0);
    out += buf;
    if (cr.at.n >= 0) out += std::to_string(cr.at.n);
    out += ',';
    if (cr.at.z) {
      std::snprintf(buf, sizeof buf, "%.17e,%.17e", cr.at.z->real(), cr.at.z->imag());
      out += buf;
    } else {
      out += ',';
    }
    out += '\n';
  }
  return out;
}

}  // namespace lop
