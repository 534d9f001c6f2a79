#include "ladderops/ladderops.h"

#include "ladderops/verify.hpp"

#include <json.hpp>

#include <cstring>
#include <new>
#include <sstream>

struct lop_weight {
  lop::WeightSpec spec;
};

struct lop_context {
  unsigned bits = 256;
  unsigned nodes = 200;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::map<std::string, double> tolerances;
  std::optional<lop::Perturbation> perturbation;
};

namespace {

using nlohmann::ordered_json;
using namespace lop;

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return LOP_OK;
  } catch (const Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LOP_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LOP_INTERNAL, std::string("internal: ") + e.what());
  } catch (...) {
    return fail(LOP_INTERNAL, "internal: unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

NumericOptions numeric(const lop_context* c) {
  NumericOptions o;
  o.precision_bits = c->bits;
  o.quad.nodes = c->nodes;
  return o;
}

RecurrenceTable table_for(const lop_context* c, const WeightSpec& w, int N) {
  RecurrenceTable t = build_table(w, N, numeric(c));
  if (c->perturbation) {
    const int k = c->perturbation->k;
    if (k < 1 || k >= t.N) throw Error(ErrorCode::DegreeOutOfRange, "perturbed index outside the table");
    t.beta[k] *= Real(1) + Real(c->perturbation->rel);
  }
  return t;
}

std::vector<std::complex<double>> z_list(const double* re, const double* im, size_t nz) {
  if (nz > 0 && (!re || !im)) throw Error(ErrorCode::BadConfig, "z arrays are NULL");
  std::vector<std::complex<double>> v;
  for (size_t i = 0; i < nz; ++i) v.emplace_back(re[i], im[i]);
  return v;
}

std::string num(const Real& x) { return lop::to_string(x); }

ordered_json cjson(const Complex& z) { return ordered_json::array({num(z.re), num(z.im)}); }

void check_format(int f) {
  if (f != LOP_FORMAT_JSON && f != LOP_FORMAT_CSV) throw Error(ErrorCode::BadConfig, "unknown format");
}

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

}  // namespace

extern "C" {

const char* lop_last_error(void) { return g_last_error.c_str(); }

const char* lop_error_name(int code) {
  if (code == LOP_OK) return "Ok";
  if (code == LOP_INTERNAL) return "Internal";
  if (code == LOP_BAD_ARGUMENT) return "BadArgument";
  if (code >= 1 && code <= 14) return error_name(static_cast<ErrorCode>(code));
  return "Unknown";
}

void lop_string_free(char* s) { std::free(s); }

int lop_weight_parse(const char* json, lop_weight** out) {
  if (!json || !out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto w = std::make_unique<lop_weight>();
    w->spec = weight_from_json(json);
    *out = w.release();
  });
}

void lop_weight_free(lop_weight* w) { delete w; }

int lop_weight_to_json(const lop_weight* w, char** out) {
  if (!w || !out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] { *out = dup(weight_to_json(w->spec)); });
}

int lop_context_new(lop_context** out) {
  if (!out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] { *out = new lop_context(); });
}

void lop_context_free(lop_context* ctx) { delete ctx; }

int lop_context_set_precision(lop_context* ctx, unsigned bits) {
  if (!ctx) return fail(LOP_BAD_ARGUMENT, "NULL context");
  if (bits < 64 || bits > 65536) return fail(LOP_BAD_CONFIG, "precision must be in [64, 65536] bits");
  ctx->bits = bits;
  return LOP_OK;
}

int lop_context_set_nodes(lop_context* ctx, unsigned nodes) {
  if (!ctx) return fail(LOP_BAD_ARGUMENT, "NULL context");
  if (nodes < 2 || nodes > 100000) return fail(LOP_BAD_NODE_COUNT, "nodes per segment must be in [2, 100000]");
  ctx->nodes = nodes;
  return LOP_OK;
}

int lop_context_set_seed(lop_context* ctx, uint64_t seed) {
  if (!ctx) return fail(LOP_BAD_ARGUMENT, "NULL context");
  ctx->seed = seed;
  return LOP_OK;
}

int lop_context_set_threads(lop_context* ctx, unsigned threads) {
  if (!ctx) return fail(LOP_BAD_ARGUMENT, "NULL context");
  if (threads < 1) return fail(LOP_BAD_CONFIG, "threads must be >= 1");
  ctx->threads = threads;
  return LOP_OK;
}

int lop_context_set_tolerance(lop_context* ctx, const char* check, double tol) {
  if (!ctx || !check) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  if (!(tol > 0)) return fail(LOP_BAD_CONFIG, "tolerance must be positive");
  return guarded([&] { ctx->tolerances[check] = tol; });
}

int lop_context_set_perturbation(lop_context* ctx, int k, double rel) {
  if (!ctx) return fail(LOP_BAD_ARGUMENT, "NULL context");
  if (rel == 0) {
    ctx->perturbation.reset();
    return LOP_OK;
  }
  if (k < 1) return fail(LOP_DEGREE_OUT_OF_RANGE, "perturbed index must be >= 1");
  ctx->perturbation = Perturbation{k, rel};
  return LOP_OK;
}

int lop_recurrence(const lop_context* ctx, const lop_weight* w, int n_max, int format, char** out) {
  if (!ctx || !w || !out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] {
    check_format(format);
    if (n_max < 0) throw Error(ErrorCode::DegreeOutOfRange, "n_max must be >= 0");
    PrecisionScope scope(ctx->bits);
    const RecurrenceTable t = table_for(ctx, w->spec, n_max + 1);
    if (format == LOP_FORMAT_CSV) {
      std::string s = "n,alpha,beta,h,p\n";
      for (int n = 0; n <= n_max; ++n)
        s += std::to_string(n) + "," + num(t.alpha[n]) + "," + num(t.beta[n]) + "," + num(t.h[n]) + "," +
             num(t.p1[n]) + "\n";
      *out = dup(s);
    } else {
      ordered_json j;
      j["weight"] = ordered_json::parse(weight_to_json(w->spec));
      j["precision_bits"] = ctx->bits;
      j["nodes"] = ctx->nodes;
      ordered_json rows = ordered_json::array();
      for (int n = 0; n <= n_max; ++n)
        rows.push_back({{"n", n}, {"alpha", num(t.alpha[n])}, {"beta", num(t.beta[n])},
                        {"h", num(t.h[n])}, {"p", num(t.p1[n])}});
      j["rows"] = rows;
      *out = dup(j.dump(2) + "\n");
    }
  });
}

int lop_hankel(const lop_context* ctx, const lop_weight* w, int n_max, int format, char** out) {
  if (!ctx || !w || !out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] {
    check_format(format);
    if (n_max < 1) throw Error(ErrorCode::DegreeOutOfRange, "n_max must be >= 1");
    PrecisionScope scope(ctx->bits);
    const RecurrenceTable t = table_for(ctx, w->spec, n_max);
    const auto D = hankel_dets(t);
    const bool closed = detect_example(w->spec) == Example::LaguerreClassical;
    std::vector<Real> G;
    if (closed)
      for (int n = 1; n <= n_max; ++n) G.push_back(barnes_g_hankel(n, Real(w->spec.lambda)));
    if (format == LOP_FORMAT_CSV) {
      std::string s = closed ? "n,D,closed\n" : "n,D\n";
      for (int n = 1; n <= n_max; ++n) {
        s += std::to_string(n) + "," + num(D[n - 1]);
        if (closed) s += "," + num(G[n - 1]);
        s += "\n";
      }
      *out = dup(s);
    } else {
      ordered_json rows = ordered_json::array();
      for (int n = 1; n <= n_max; ++n) {
        ordered_json r{{"n", n}, {"D", num(D[n - 1])}};
        if (closed) r["closed"] = num(G[n - 1]);
        rows.push_back(r);
      }
      ordered_json j;
      j["weight"] = ordered_json::parse(weight_to_json(w->spec));
      j["precision_bits"] = ctx->bits;
      j["nodes"] = ctx->nodes;
      j["rows"] = rows;
      *out = dup(j.dump(2) + "\n");
    }
  });
}

int lop_ladder(const lop_context* ctx, const lop_weight* w, int n, const double* z_re, const double* z_im,
               size_t nz, int format, char** out) {
  if (!ctx || !w || !out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] {
    check_format(format);
    if (n < 0) throw Error(ErrorCode::DegreeOutOfRange, "n must be >= 0");
    const auto zs = z_list(z_re, z_im, nz);
    if (zs.empty()) throw Error(ErrorCode::BadConfig, "no z values");
    PrecisionScope scope(ctx->bits);
    const RecurrenceTable t = table_for(ctx, w->spec, n + 2);
    const Workspace ws = make_workspace(w->spec, t, numeric(ctx).quad);
    std::vector<LadderPair> pairs;
    for (const auto& zd : zs) pairs.push_back(ladder_pair(ws, n, Complex(zd.real(), zd.imag())));

    auto jump_sum = [](const LadderParts& p) {
      Complex s;
      for (const auto& r : p.jump_residues) s += r;
      return s;
    };
    if (format == LOP_FORMAT_CSV) {
      std::string s =
          "z_re,z_im,n,A_re,A_im,B_re,B_im,A_smooth_re,A_smooth_im,A_count_re,A_count_im,A_jump_re,"
          "A_jump_im,A_fh_re,A_fh_im,B_smooth_re,B_smooth_im,B_count_re,B_count_im,B_jump_re,B_jump_im,"
          "B_fh_re,B_fh_im\n";
      auto c = [](const Complex& v) { return "," + num(v.re) + "," + num(v.im); };
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const auto& p = pairs[i];
        s += csv_double(zs[i].real()) + "," + csv_double(zs[i].imag()) + "," + std::to_string(n) + c(p.A) +
             c(p.B) + c(p.a_parts.smooth_integral) + c(p.a_parts.counting_term) + c(jump_sum(p.a_parts)) +
             c(p.a_parts.fh_term) + c(p.b_parts.smooth_integral) + c(p.b_parts.counting_term) +
             c(jump_sum(p.b_parts)) + c(p.b_parts.fh_term) + "\n";
      }
      *out = dup(s);
    } else {
      auto parts = [](const LadderParts& p) {
        ordered_json jr = ordered_json::array();
        for (const auto& r : p.jump_residues) jr.push_back(cjson(r));
        return ordered_json{{"smooth_integral", cjson(p.smooth_integral)},
                            {"counting_term", cjson(p.counting_term)},
                            {"jump_residues", jr},
                            {"fh_term", cjson(p.fh_term)}};
      };
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const auto& p = pairs[i];
        rows.push_back({{"z", {zs[i].real(), zs[i].imag()}},
                        {"n", n},
                        {"A", cjson(p.A)},
                        {"B", cjson(p.B)},
                        {"A_parts", parts(p.a_parts)},
                        {"B_parts", parts(p.b_parts)}});
      }
      ordered_json j;
      j["weight"] = ordered_json::parse(weight_to_json(w->spec));
      j["precision_bits"] = ctx->bits;
      j["nodes"] = ctx->nodes;
      j["entries"] = rows;
      *out = dup(j.dump(2) + "\n");
    }
  });
}

int lop_rhp(const lop_context* ctx, const lop_weight* w, int n_max, const double* z_re, const double* z_im,
            size_t nz, int format, char** out) {
  if (!ctx || !w || !out) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] {
    check_format(format);
    if (n_max < 1) throw Error(ErrorCode::DegreeOutOfRange, "n_max must be >= 1");
    auto zs = z_list(z_re, z_im, nz);
    if (zs.empty()) zs = default_z_samples(w->spec, 10, ctx->seed);
    for (const auto& z : zs)
      if (on_closed_support(w->spec, Complex(z.real(), z.imag())))
        throw Error(ErrorCode::ZOnSupport, "z lies on the support");
    PrecisionScope scope(ctx->bits);
    const NumericOptions o = numeric(ctx);
    const RecurrenceTable t = table_for(ctx, w->spec, n_max + 2);
    const Workspace ws = make_workspace(w->spec, t, o.quad);
    const bool smooth = is_smooth(w->spec);

    struct Row {
      int n;
      std::complex<double> z;
      double det, trace, jump;
      std::optional<std::array<std::array<double, 2>, 2>> r;
    };
    std::vector<double> jump(n_max + 1, 0.0);
    const double x = default_jump_point(w->spec);
    for (int n = 1; n <= n_max; ++n) jump[n] = static_cast<double>(plemelj_residual(w->spec, t, o.quad, n, x, 1e-8));
    std::vector<Row> rows;
    for (int n = 1; n <= n_max; ++n)
      for (const auto& zd : zs) {
        const Complex z(zd.real(), zd.imag());
        const RhpFrame f = y_frame(ws, n, z);
        Row row{n, zd, static_cast<double>(det_residual(f)), static_cast<double>(trace_residual(f)), jump[n], {}};
        if (smooth) {
          const auto rr = r_elements_residual(f, r_closed(ws, n, z));
          std::array<std::array<double, 2>, 2> d;
          for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) d[i][k] = static_cast<double>(rr[i][k]);
          row.r = d;
        }
        rows.push_back(row);
      }
    if (format == LOP_FORMAT_CSV) {
      std::string s = "n,z_re,z_im,dety_residual,trace_residual,r11,r12,r21,r22,jump_residual\n";
      for (const auto& r : rows) {
        s += std::to_string(r.n) + "," + csv_double(r.z.real()) + "," + csv_double(r.z.imag()) + "," +
             csv_double(r.det) + "," + csv_double(r.trace);
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) s += "," + (r.r ? csv_double((*r.r)[i][k]) : std::string());
        s += "," + csv_double(r.jump) + "\n";
      }
      *out = dup(s);
    } else {
      ordered_json ent = ordered_json::array();
      for (const auto& r : rows) {
        ordered_json rr = r.r ? ordered_json{{(*r.r)[0][0], (*r.r)[0][1]}, {(*r.r)[1][0], (*r.r)[1][1]}}
                              : ordered_json(nullptr);
        ent.push_back({{"n", r.n},
                       {"z", {r.z.real(), r.z.imag()}},
                       {"dety_residual", r.det},
                       {"trace_residual", r.trace},
                       {"r_residuals", rr},
                       {"jump_residual", r.jump}});
      }
      ordered_json j;
      j["weight"] = ordered_json::parse(weight_to_json(w->spec));
      j["precision_bits"] = ctx->bits;
      j["nodes"] = ctx->nodes;
      j["jump_point"] = x;
      j["entries"] = ent;
      *out = dup(j.dump(2) + "\n");
    }
  });
}

int lop_verify(const lop_context* ctx, const lop_weight* w, int n_max, const double* z_re, const double* z_im,
               size_t nz, const char* checks, int include_timing, int format, char** out, int* passed) {
  if (!ctx || !w || !out || !passed) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] {
    check_format(format);
    Campaign c;
    c.weight = w->spec;
    c.n_max = n_max;
    c.precision_bits = ctx->bits;
    c.nodes = ctx->nodes;
    c.seed = ctx->seed;
    c.threads = ctx->threads;
    c.tolerances = ctx->tolerances;
    c.perturbation = ctx->perturbation;
    c.z_samples = z_list(z_re, z_im, nz);
    if (c.z_samples.empty()) c.z_samples = default_z_samples(w->spec, 20, ctx->seed);
    if (checks && *checks) {
      c.checks.clear();
      std::stringstream ss(checks);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto k = check_from_name(item);
        if (!k) throw Error(ErrorCode::BadConfig, "unknown check '" + item + "'");
        if (std::find(c.checks.begin(), c.checks.end(), *k) == c.checks.end()) c.checks.push_back(*k);
      }
    }
    const Report r = run_campaign(c);
    *out = dup(format == LOP_FORMAT_CSV ? report_to_csv(r) : report_to_json(r, include_timing != 0));
    *passed = r.pass ? 1 : 0;
  });
}

int lop_diff_check(const lop_context* ctx, const lop_weight* w, int n_max, double step, int format, char** out,
                   int* passed) {
  if (!ctx || !w || !out || !passed) return fail(LOP_BAD_ARGUMENT, "NULL argument");
  return guarded([&] {
    check_format(format);
    DiffOptions d;
    if (step > 0) d.step = step;
    d.numeric = numeric(ctx);
    PrecisionScope scope(ctx->bits);
    const auto res = diff_identity_residuals(w->spec, n_max, d);
    Campaign c;
    c.weight = w->spec;
    c.precision_bits = ctx->bits;
    c.tolerances = ctx->tolerances;
    bool ok = true;
    if (format == LOP_FORMAT_CSV) {
      std::string s = "identity,n,lhs,rhs,residual,tolerance,pass\n";
      for (const auto& r : res) {
        const double tol = tolerance_for(c, "diff_t." + r.name);
        const bool p = static_cast<double>(r.residual) <= tol;
        ok = ok && p;
        s += r.name + "," + std::to_string(r.n) + "," + num(r.lhs) + "," + num(r.rhs) + "," +
             csv_double(static_cast<double>(r.residual)) + "," + csv_double(tol) + "," + (p ? "1" : "0") + "\n";
      }
      *out = dup(s);
    } else {
      ordered_json rows = ordered_json::array();
      for (const auto& r : res) {
        const double tol = tolerance_for(c, "diff_t." + r.name);
        const bool p = static_cast<double>(r.residual) <= tol;
        ok = ok && p;
        rows.push_back({{"identity", r.name},
                        {"n", r.n},
                        {"lhs", num(r.lhs)},
                        {"rhs", num(r.rhs)},
                        {"residual", static_cast<double>(r.residual)},
                        {"tolerance", tol},
                        {"pass", p}});
      }
      ordered_json j;
      j["weight"] = ordered_json::parse(weight_to_json(w->spec));
      j["precision_bits"] = ctx->bits;
      j["nodes"] = ctx->nodes;
      j["step"] = d.step;
      j["entries"] = rows;
      j["pass"] = ok;
      *out = dup(j.dump(2) + "\n");
    }
    *passed = ok ? 1 : 0;
  });
}

}  // extern "C"
