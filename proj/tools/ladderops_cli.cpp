// Command-line front end; talks to the library through the C API only.
#include "ladderops/ladderops.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string weight_path;
  int n_max = 8;
  unsigned bits = 256;
  unsigned nodes = 200;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
  std::vector<std::string> tols;
  int n = -1;
  std::vector<std::string> zs;
  std::string checks;
  bool timing = false;
  std::string perturb;
  double step = 0;
};

struct Failure {
  int exit_code;
  std::string message;
};

int exit_for_status(int status) {
  switch (status) {
    case LOP_EVALUATION_FAILURE:
    case LOP_PRECISION_EXHAUSTED:
    case LOP_STEP_TOO_LARGE:
    case LOP_INTERNAL:
      return kExitNumeric;
    default:
      return kExitConfig;
  }
}

void check(int status) {
  if (status != LOP_OK) throw Failure{exit_for_status(status), lop_last_error()};
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// "a", "a+bi", "a-bi", "bi", "i", "-i".
bool parse_complex(std::string s, double& re, double& im) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  re = im = 0;
  if (s.empty()) return false;
  if (s.back() != 'i') return parse_double(s, re);
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  std::string a = split == std::string::npos ? "" : s.substr(0, split);
  std::string b = split == std::string::npos ? s : s.substr(split);
  if (b.empty() || b == "+") b = "1";
  if (b == "-") b = "-1";
  if (!a.empty() && !parse_double(a, re)) return false;
  return parse_double(b, im);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "cannot read weight file '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_out_path(const std::string& out) {
  if (out.empty()) return;
  const auto parent = std::filesystem::path(out).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw Failure{kExitConfig, "output directory '" + parent.string() + "' does not exist"};
}

void emit(const Options& o, const char* text) {
  if (o.out.empty()) {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Failure{kExitConfig, "cannot write '" + o.out + "'"};
  f << text;
  if (!f) throw Failure{kExitConfig, "write to '" + o.out + "' failed"};
}

class Session {
public:
  explicit Session(const Options& o) {
    check(lop_context_new(&ctx_));
    check(lop_context_set_precision(ctx_, o.bits));
    check(lop_context_set_nodes(ctx_, o.nodes));
    check(lop_context_set_seed(ctx_, o.seed));
    check(lop_context_set_threads(ctx_, o.threads));
    for (const auto& t : o.tols) {
      const auto eq = t.find('=');
      double v = 0;
      if (eq == std::string::npos || !parse_double(t.substr(eq + 1), v))
        throw Failure{kExitConfig, "--tol expects <check>=<float>, got '" + t + "'"};
      check(lop_context_set_tolerance(ctx_, t.substr(0, eq).c_str(), v));
    }
    if (!o.perturb.empty()) {
      const auto eq = o.perturb.find('=');
      double k = 0, rel = 0;
      if (eq == std::string::npos || !parse_double(o.perturb.substr(0, eq), k) ||
          !parse_double(o.perturb.substr(eq + 1), rel))
        throw Failure{kExitConfig, "--perturb-beta expects <k>=<relative>"};
      check(lop_context_set_perturbation(ctx_, static_cast<int>(k), rel));
    }
    check(lop_weight_parse(read_file(o.weight_path).c_str(), &w_));
    format_ = o.format == "csv" ? LOP_FORMAT_CSV : LOP_FORMAT_JSON;
    for (const auto& z : o.zs) {
      double re = 0, im = 0;
      if (!parse_complex(z, re, im)) throw Failure{kExitConfig, "cannot parse --z '" + z + "'"};
      re_.push_back(re);
      im_.push_back(im);
    }
  }
  ~Session() {
    lop_weight_free(w_);
    lop_context_free(ctx_);
  }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  lop_context* ctx() const { return ctx_; }
  lop_weight* weight() const { return w_; }
  int format() const { return format_; }
  const double* re() const { return re_.data(); }
  const double* im() const { return im_.data(); }
  std::size_t nz() const { return re_.size(); }

private:
  lop_context* ctx_ = nullptr;
  lop_weight* w_ = nullptr;
  int format_ = LOP_FORMAT_JSON;
  std::vector<double> re_, im_;
};

struct Text {
  char* p = nullptr;
  ~Text() { lop_string_free(p); }
};

int run(const std::string& cmd, const Options& o) {
  check_out_path(o.out);
  Session s(o);
  Text t;
  int passed = 1;
  if (cmd == "recurrence") {
    check(lop_recurrence(s.ctx(), s.weight(), o.n_max, s.format(), &t.p));
  } else if (cmd == "hankel") {
    check(lop_hankel(s.ctx(), s.weight(), o.n_max, s.format(), &t.p));
  } else if (cmd == "ladder") {
    if (o.n < 0) throw Failure{kExitConfig, "ladder needs --n"};
    if (s.nz() == 0) throw Failure{kExitConfig, "ladder needs at least one --z"};
    check(lop_ladder(s.ctx(), s.weight(), o.n, s.re(), s.im(), s.nz(), s.format(), &t.p));
  } else if (cmd == "rhp") {
    check(lop_rhp(s.ctx(), s.weight(), o.n_max, s.re(), s.im(), s.nz(), s.format(), &t.p));
  } else if (cmd == "verify") {
    check(lop_verify(s.ctx(), s.weight(), o.n_max, s.re(), s.im(), s.nz(),
                     o.checks.empty() ? nullptr : o.checks.c_str(), o.timing ? 1 : 0, s.format(), &t.p,
                     &passed));
  } else if (cmd == "diff-check") {
    check(lop_diff_check(s.ctx(), s.weight(), o.n_max, o.step, s.format(), &t.p, &passed));
  } else {
    throw Failure{kExitConfig, "unknown subcommand"};
  }
  emit(o, t.p);
  return passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-precision ladder operators for semi-classical orthogonal polynomials"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--weight", o.weight_path, "weight JSON file")->required();
    sc->add_option("--n-max", o.n_max, "largest degree")->check(CLI::NonNegativeNumber);
    sc->add_option("--precision-bits", o.bits, "working precision in bits")->check(CLI::Range(64u, 65536u));
    sc->add_option("--nodes", o.nodes, "Gauss nodes per segment")->check(CLI::Range(2u, 100000u));
    sc->add_option("--seed", o.seed, "seed for z sampling");
    sc->add_option("--threads", o.threads, "worker threads for verify")->check(CLI::PositiveNumber);
    sc->add_option("--out", o.out, "output file (stdout when absent)");
    sc->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--tol", o.tols, "tolerance override <check>=<float>")->take_all();
  };

  auto* rec = app.add_subcommand("recurrence", "recurrence coefficients alpha, beta, h, p");
  common(rec);
  auto* hk = app.add_subcommand("hankel", "Hankel determinants from the table");
  common(hk);
  auto* lad = app.add_subcommand("ladder", "A_n(z), B_n(z) with their parts");
  common(lad);
  lad->add_option("--n", o.n, "degree")->required()->check(CLI::NonNegativeNumber);
  lad->add_option("--z", o.zs, "evaluation point, e.g. 2, -1.5, 0.3+2i")->required()->allow_extra_args(false);
  auto* rh = app.add_subcommand("rhp", "Y-matrix residuals");
  common(rh);
  rh->add_option("--z", o.zs, "evaluation point")->allow_extra_args(false);
  auto* ver = app.add_subcommand("verify", "run a verification campaign");
  common(ver);
  ver->add_option("--z", o.zs, "sample point (default: 20 seeded samples)")->allow_extra_args(false);
  ver->add_option("--checks", o.checks, "comma list of check groups");
  ver->add_flag("--timing", o.timing, "include duration_ms in the report");
  ver->add_option("--perturb-beta", o.perturb, "multiply beta_k by 1+rel, as k=rel");
  auto* dc = app.add_subcommand("diff-check", "t-derivative identities");
  common(dc);
  dc->add_option("--step", o.step, "central-difference step (default 2^-40)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? kExitPass : kExitConfig;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
}
