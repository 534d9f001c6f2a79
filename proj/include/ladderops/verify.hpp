#pragma once

#include "ladderops/ladder.hpp"
#include "ladderops/rhp.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lop {

enum class Check { Orthogonality, Ladder, Compat, Rhp, Oracle, DiffT, KernelOracle };

const char* check_name(Check c);
std::optional<Check> check_from_name(const std::string& s);
std::vector<Check> all_checks();

// Multiplies beta_k of the built table by (1 + rel) before anything else runs.
struct Perturbation {
  int k = 3;
  double rel = 1e-6;
};

struct Campaign {
  WeightSpec weight;
  int n_max = 8;
  std::vector<std::complex<double>> z_samples;
  std::vector<Check> checks = all_checks();
  unsigned precision_bits = 256;
  unsigned nodes = 200;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool convergence = true;  // rebuild at 2m nodes and report the deltas
  std::map<std::string, double> tolerances;  // overrides by sub-check or group name
  std::optional<Perturbation> perturbation;
};

struct Location {
  int n = -1;  // -1 when the check is not tied to a degree
  std::optional<std::complex<double>> z;
};

struct CheckResult {
  double worst = 0;
  Location at;
  double tolerance = 0;
  bool pass = true;
};

struct Convergence {
  unsigned m = 0;
  unsigned m2 = 0;
  double table_delta = 0;   // max relative change of alpha, beta, h
  double ladder_delta = 0;  // max relative change of A_n, B_n at the first z sample
};

struct Report {
  Campaign campaign;
  std::map<std::string, CheckResult> results;  // sorted by sub-check name
  std::optional<Convergence> convergence;
  bool pass = true;
  double duration_ms = 0;
};

// Sub-check names: orthogonality, ladder.lowering, ladder.raising, compat.s1,
// compat.s2, compat.s2p, rhp.det, rhp.trace, rhp.commute, rhp.r_elements,
// rhp.ladder_from_r, rhp.plemelj, oracle, diff_t.<identity>, kernel_oracle.
double default_tolerance(const std::string& sub_check, const WeightSpec& w, unsigned bits);
double tolerance_for(const Campaign& c, const std::string& sub_check);

std::vector<std::complex<double>> default_z_samples(const WeightSpec& w, int count, std::uint64_t seed);

// Interior point used for the boundary-value check, kept 0.1 away from poles.
double default_jump_point(const WeightSpec& w);

// Throws ZOnSupport or SingularPoint for an inadmissible sample.
void check_z_sample(const WeightSpec& w, std::complex<double> z);

Report run_campaign(const Campaign& c);

std::string report_to_json(const Report& r, bool include_timing = true);
std::string report_to_csv(const Report& r);

}  // namespace lop
