#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

const fs::path& tmp_dir() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / "ladderops_cli_test";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string fixture(const std::string& name) { return std::string(LADDEROPS_FIXTURE_DIR) + "/" + name + ".json"; }

std::string write_tmp(const std::string& name, const std::string& body) {
  const fs::path p = tmp_dir() / name;
  std::ofstream(p) << body;
  return p.string();
}

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + LADDEROPS_CLI + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  for (size_t k; (k = std::fread(buf, 1, sizeof buf, f)) > 0;) r.out.append(buf, k);
  const int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

const std::string kL0 = R"({"family":"laguerre","lambda":0,"atoms":[{"kind":"ExpLinear","params":{"c":1.0}}]})";

// Value of the first quoted or bare number after key.
double number_after(const std::string& s, const std::string& key) {
  std::size_t p = s.find(key);
  REQUIRE(p != std::string::npos);
  p = s.find_first_of("-0123456789", p + key.size());
  return std::stod(s.substr(p));
}

}  // namespace

TEST_CASE("recurrence csv") {
  const std::string w = write_tmp("l0.json", kL0);
  const Run r = run("recurrence --weight " + w + " --n-max 3 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,alpha,beta,h,p\n", 0) == 0);
  const auto row = r.out.find("\n2,");
  REQUIRE(row != std::string::npos);
  std::stringstream ls(r.out.substr(row + 1, r.out.find('\n', row + 1) - row - 1));
  std::string cell;
  double v[5];
  for (double& x : v) {
    std::getline(ls, cell, ',');
    x = std::stod(cell);
  }
  CHECK(v[1] == doctest::Approx(5).epsilon(1e-15));
  CHECK(v[2] == doctest::Approx(4).epsilon(1e-15));
  CHECK(v[3] == doctest::Approx(4).epsilon(1e-15));
}

TEST_CASE("ladder values") {
  const std::string w = write_tmp("l0.json", kL0);
  const Run r = run("ladder --weight " + w + " --n 1 --z -2");
  CHECK(r.code == 0);
  CHECK(number_after(r.out, "\"A\"") == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(number_after(r.out, "\"B\"") == doctest::Approx(0.5).epsilon(1e-15));

  const Run l = run("ladder --weight " + fixture("legendre") + " --n 1 --z 2");
  CHECK(l.code == 0);
  CHECK(number_after(l.out, "\"A\"") == doctest::Approx(-1).epsilon(1e-15));

  const Run c = run("ladder --weight " + w + " --n 1 --z 0.3+2i --format csv");
  CHECK(c.code == 0);
}

TEST_CASE("verify exit codes") {
  const std::string w = fixture("laguerre_classical");
  const std::string common = " --weight " + w + " --n-max 6 --z -1 --z 0.5+1i --checks ladder,compat";
  const Run ok = run("verify" + common);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"pass\": true") != std::string::npos);
  CHECK(run("verify" + common).out == ok.out);
  CHECK(run("verify" + common + " --threads 2").out == ok.out);
  CHECK(ok.out.find("duration_ms") == std::string::npos);
  CHECK(run("verify" + common + " --timing").out.find("duration_ms") != std::string::npos);

  const Run canary = run("verify" + common + " --perturb-beta 3=1e-6");
  CHECK(canary.code == 1);
  CHECK(run("verify" + common + " --perturb-beta 3=1e-6 --tol ladder=1 --tol compat=1").code == 0);

  const Run csv = run("verify" + common + " --format csv");
  CHECK(csv.out.rfind("check,worst,tolerance,pass,n,z_re,z_im\n", 0) == 0);
}

TEST_CASE("out file") {
  const std::string w = write_tmp("l0.json", kL0);
  const fs::path out = tmp_dir() / "rec.csv";
  fs::remove(out);
  const Run r = run("recurrence --weight " + w + " --n-max 2 --format csv --out " + out.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::string head;
  std::getline(in, head);
  CHECK(head == "n,alpha,beta,h,p");
  CHECK(run("recurrence --weight " + w + " --n-max 2 --out " + (tmp_dir() / "no/such/dir/x.csv").string()).code == 2);
}

TEST_CASE("input errors exit with 2") {
  const std::string bad = write_tmp("bad.json", "{\"family\": ");
  CHECK(run("recurrence --weight " + bad + " --n-max 2").code == 2);
  const std::string neg =
      write_tmp("neg.json", R"({"family":"laguerre","lambda":-1,"atoms":[{"kind":"ExpLinear","params":{"c":1.0}}]})");
  CHECK(run("recurrence --weight " + neg + " --n-max 2").code == 2);
  CHECK(run("recurrence --weight " + (tmp_dir() / "missing.json").string() + " --n-max 2").code == 2);
  const std::string w = write_tmp("l0.json", kL0);
  CHECK(run("ladder --weight " + w + " --n 1 --z 2").code == 2);
  CHECK(run("ladder --weight " + w + " --n 1 --z banana").code == 2);
  CHECK(run("verify --weight " + w + " --n-max 2 --checks nope").code == 2);
  CHECK(run("diff-check --weight " + w + " --n-max 2").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("diff-check") {
  const Run r = run("diff-check --weight " + fixture("shifted_jacobi_power") + " --n-max 3");
  CHECK(r.code == 0);
  CHECK(run("diff-check --weight " + fixture("shifted_jacobi_power") + " --n-max 3 --step 0.25").code == 3);
}

TEST_CASE("hankel and rhp") {
  const std::string w = write_tmp("l0.json", kL0);
  const Run h = run("hankel --weight " + w + " --n-max 3 --format csv");
  CHECK(h.code == 0);
  CHECK(number_after(h.out, "\n3,") == doctest::Approx(4).epsilon(1e-15));
  const Run r = run("rhp --weight " + w + " --n-max 2 --z -1 --format csv");
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}
