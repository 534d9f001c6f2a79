#include "common.hpp"

#include <nlohmann/json.hpp>

using namespace lop;

namespace {

Campaign small(const WeightSpec& w, int n_max, int nz, std::vector<Check> checks) {
  Campaign c;
  c.weight = w;
  c.n_max = n_max;
  c.z_samples = default_z_samples(w, nz, 42);
  c.checks = std::move(checks);
  c.convergence = false;
  return c;
}

}  // namespace

TEST_CASE("z sampling") {
  for (const char* name : {"laguerre_classical", "chen_mckay", "jacobi_exp", "shifted_jacobi_fh", "laguerre_two_jump"}) {
    const WeightSpec w = testutil::fixture(name);
    const auto zs = default_z_samples(w, 20, 42);
    REQUIRE(zs.size() == 20);
    CHECK(zs == default_z_samples(w, 20, 42));
    CHECK(zs != default_z_samples(w, 20, 43));
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const auto z = zs[i];
      CHECK_NOTHROW(check_z_sample(w, z));
      if (i < 10) {
        CHECK(std::abs(z.imag()) >= 0.5);
        CHECK(std::abs(z.imag()) <= 3.0);
      } else {
        CHECK(z.imag() == 0);
        if (w.family == Family::Laguerre) CHECK(z.real() <= -0.5);
        if (w.family == Family::Jacobi) CHECK(std::abs(z.real()) >= 1.5);
      }
    }
  }
  testutil::expect_error(ErrorCode::BadConfig, [] { default_z_samples(laguerre(0), 0, 1); });
  testutil::expect_error(ErrorCode::ZOnSupport, [] { check_z_sample(laguerre(0), {2.0, 0.0}); });
  testutil::expect_error(ErrorCode::SingularPoint,
                         [] { check_z_sample(testutil::fixture("chen_mckay"), {-1.05, 0.0}); });
  testutil::expect_error(ErrorCode::BadConfig,
                         [] { check_z_sample(laguerre(0), {std::nan(""), 0.0}); });
}

TEST_CASE("default tolerances and overrides") {
  const WeightSpec smooth = laguerre(0), fh = testutil::fixture("laguerre_fh");
  CHECK(default_tolerance("ladder.lowering", smooth, 256) == 1e-15);
  CHECK(default_tolerance("rhp.plemelj", smooth, 256) == 1e-4);
  CHECK(default_tolerance("diff_t.s1", smooth, 256) == 1e-10);
  CHECK(default_tolerance("diff_t.s1", fh, 256) == 1e-8);
  CHECK(default_tolerance("kernel_oracle", smooth, 256) == std::ldexp(1e3, -255));

  Campaign c;
  c.weight = smooth;
  c.tolerances = {{"ladder", 1e-3}, {"ladder.raising", 1e-5}};
  CHECK(tolerance_for(c, "ladder.lowering") == 1e-3);
  CHECK(tolerance_for(c, "ladder.raising") == 1e-5);
  CHECK(tolerance_for(c, "compat.s1") == 1e-15);
}

TEST_CASE("check names round trip") {
  for (Check k : all_checks()) CHECK(check_from_name(check_name(k)) == k);
  CHECK_FALSE(check_from_name("ladders").has_value());
  CHECK(all_checks().size() == 7);
}

TEST_CASE("campaigns on classical weights pass") {
  for (const WeightSpec& w : {laguerre(-0.5), jacobi(0, 0)}) {
    Campaign c;
    c.weight = w;
    c.n_max = 8;
    c.z_samples = default_z_samples(w, 20, 42);
    const Report r = run_campaign(c);
    for (const auto& [name, cr] : r.results) CHECK_MESSAGE(cr.pass, name << " worst " << cr.worst);
    CHECK(r.pass);
    REQUIRE(r.convergence.has_value());
    CHECK(r.convergence->m2 == 2 * r.convergence->m);
    CHECK(r.results.count("ladder.lowering") == 1);
    CHECK(r.results.count("rhp.det") == 1);
    CHECK(r.results.count("kernel_oracle") == 1);
  }
}

TEST_CASE("canary fails the ladder check") {
  Campaign c = small(laguerre(-0.5), 8, 6, {Check::Ladder});
  c.perturbation = Perturbation{3, 1e-6};
  const Report r = run_campaign(c);
  CHECK_FALSE(r.pass);
  double worst = 0;
  for (const auto& [name, cr] : r.results) worst = std::max(worst, cr.worst);
  CHECK(worst >= 1e-8);

  c.perturbation = Perturbation{0, 1e-6};
  testutil::expect_error(ErrorCode::DegreeOutOfRange, [&] { run_campaign(c); });
}

TEST_CASE("reports are byte stable") {
  Campaign c = small(testutil::fixture("jacobi_exp"), 4, 6, {Check::Ladder, Check::Compat, Check::Rhp});
  const std::string a = report_to_json(run_campaign(c), false);
  c.threads = 3;
  const Report r3 = run_campaign(c);
  CHECK(report_to_json(r3, false) == a);
  CHECK(report_to_csv(r3) == report_to_csv(run_campaign(c)));
  CHECK(report_to_json(r3, true).find("duration_ms") != std::string::npos);
  CHECK(a.find("duration_ms") == std::string::npos);
}

TEST_CASE("report layout") {
  Campaign c = small(laguerre(0), 3, 2, {Check::Ladder, Check::Orthogonality});
  c.tolerances = {{"ladder", 1e-12}};
  const Report r = run_campaign(c);
  const auto j = nlohmann::ordered_json::parse(report_to_json(r));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"campaign", "results", "convergence", "pass", "meta"});
  CHECK(j["campaign"]["tolerance_overrides"]["ladder"] == 1e-12);
  CHECK(j["results"]["ladder.lowering"]["tolerance"] == 1e-12);
  CHECK(j["results"]["orthogonality"]["at"]["z"].is_null());
  CHECK(j["convergence"].is_null());
  CHECK(j["meta"]["precision_bits"] == 256);

  const std::string csv = report_to_csv(r);
  CHECK(csv.rfind("check,worst,tolerance,pass,n,z_re,z_im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.results.size()) + 1);
  for (std::size_t p = csv.find('\n'); p + 1 < csv.size(); p = csv.find('\n', p + 1)) {
    const std::string line = csv.substr(p + 1, csv.find('\n', p + 1) - p - 1);
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
}

TEST_CASE("tight override fails and loose override passes") {
  Campaign c = small(laguerre(0.5), 4, 4, {Check::Ladder});
  c.tolerances = {{"ladder.lowering", 1e-200}};
  Report r = run_campaign(c);
  CHECK_FALSE(r.results.at("ladder.lowering").pass);
  CHECK(r.results.at("ladder.raising").pass);
  CHECK_FALSE(r.pass);

  c = small(laguerre(-0.5), 8, 4, {Check::Ladder});
  c.perturbation = Perturbation{3, 1e-6};
  c.tolerances = {{"ladder", 1.0}};
  CHECK(run_campaign(c).pass);
}

TEST_CASE("more precision does not make things worse") {
  const WeightSpec w = testutil::fixture("chen_its");
  Campaign lo = small(w, 6, 4, {Check::Orthogonality, Check::Ladder, Check::Compat, Check::Rhp});
  lo.precision_bits = 128;
  Campaign hi = lo;
  hi.precision_bits = 256;
  const Report a = run_campaign(lo), b = run_campaign(hi);
  for (const auto& [name, cr] : b.results) {
    const double before = a.results.at(name).worst;
    CHECK_MESSAGE(cr.worst <= 10 * before + 1e-300, name << " " << before << " -> " << cr.worst);
  }
}

TEST_CASE("campaign validation") {
  Campaign c = small(laguerre(0), 3, 2, {Check::Ladder});
  c.z_samples.push_back({1.0, 0.0});
  testutil::expect_error(ErrorCode::ZOnSupport, [&] { run_campaign(c); });

  c = small(laguerre(0), 3, 2, {Check::Ladder});
  c.z_samples.clear();
  testutil::expect_error(ErrorCode::BadConfig, [&] { run_campaign(c); });

  c = small(laguerre(0), 0, 2, {Check::Ladder});
  testutil::expect_error(ErrorCode::DegreeOutOfRange, [&] { run_campaign(c); });

  c = small(laguerre(0), 3, 2, {Check::Ladder});
  c.nodes = 1;
  testutil::expect_error(ErrorCode::BadNodeCount, [&] { run_campaign(c); });

  c = small(laguerre(0), 3, 2, {Check::Ladder});
  c.tolerances = {{"ladder", -1.0}};
  testutil::expect_error(ErrorCode::BadConfig, [&] { run_campaign(c); });

  c = small(laguerre(0), 3, 2, {Check::Ladder});
  c.precision_bits = 32;
  testutil::expect_error(ErrorCode::BadConfig, [&] { run_campaign(c); });

  // Orthogonality alone needs no z.
  c = small(laguerre(0), 3, 2, {Check::Orthogonality});
  c.z_samples.clear();
  CHECK(run_campaign(c).pass);
}
