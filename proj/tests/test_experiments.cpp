#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "windtree/experiments.hpp"

using namespace windtree;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.angle_count = 6;
  c.t_max = 2e4;
  c.seed = 17;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("fit_exponent synthetic series") {
  ExperimentConfig c;
  const auto T = c.schedule();
  std::vector<double> pw, flat;
  for (double t : T) {
    pw.push_back(std::pow(t, 2.0 / 3));
    flat.push_back(3.5);
  }
  const auto f = fit_exponent(T, pw, 0.5);
  CHECK(std::fabs(f.slope - 2.0 / 3) < 1e-12);
  CHECK(f.std_error < 1e-10);
  CHECK(std::fabs(fit_exponent(T, flat, 0.5).slope) < 1e-12);

  // Sub-polynomial growth over [1e3, 1e7].
  c.t_min = 1e3;
  const auto T2 = c.schedule();
  std::vector<double> ll;
  for (double t : T2) ll.push_back(std::log(t) * std::log(std::log(t)));
  CHECK(fit_exponent(T2, ll, 1.0).slope < 0.15);
  CHECK(fit_exponent(T2, ll, 0.5).slope < 0.15);

  CHECK_THROWS_AS(fit_exponent(std::vector<double>(T.begin(), T.begin() + 8), std::vector<double>(8, 1.0), 0.5),
                  Error);
  std::vector<double> zero = pw;
  zero.back() = 0;
  CHECK_THROWS_AS(fit_exponent(T, zero, 0.5), Error);
}

TEST_CASE("schedule and validation") {
  ExperimentConfig c;
  const auto s = c.schedule();
  CHECK(s.front() == 1.0);
  CHECK(s.back() == 1e7);
  CHECK(s.size() >= 20);
  CHECK(s[1] / s[0] == doctest::Approx(std::pow(2.0, 0.25)));
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.t_max = 500;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.schedule_ratio = 2;
  bad.t_max = 1e4;
  CHECK_THROWS_AS(bad.validate(), Error);  // 15 points
  bad = c;
  bad.fit_window_fraction = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.a = 1.2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.veech = VeechTriple{{1, 2}, {1, 2}, 4};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.veech = VeechTriple{{1, 2}, {1, 2}, 2};
  CHECK(bad.table().a == doctest::Approx(3 - 2 * std::sqrt(2.0)));
}

TEST_CASE("config hash follows the config") {
  ExperimentConfig a, b;
  CHECK(a.hash() == b.hash());
  b.seed = 2;
  CHECK(a.hash() != b.hash());
  CHECK(nlohmann::json::parse(a.to_json())["seed"] == 1);
}

TEST_CASE("quartiles") {
  const auto q = quartiles({4, 1, 3, 2, 5});
  CHECK(q.q1 == 2);
  CHECK(q.median == 3);
  CHECK(q.q3 == 4);
  CHECK(quartiles({1, 2}).median == 1.5);
  CHECK_THROWS_AS(quartiles({}), Error);
}

TEST_CASE("angle sampler") {
  for (int i = 0; i < 200; ++i) {
    const double t = sample_angle(9, i, 0);
    CHECK(t > 0);
    CHECK(t < kPi / 2);
    CHECK(t == sample_angle(9, i, 0));
    CHECK(t != sample_angle(9, i, 1));
    CHECK(t != sample_angle(10, i, 0));
    const double tn = std::tan(t);
    for (int q = 1; q <= 1000; ++q) CHECK(std::fabs(tn - std::nearbyint(tn * q) / q) >= 1e-9);
  }
}

TEST_CASE("diffusion run is deterministic and thread independent") {
  auto c = small_config();
  const auto r1 = run_diffusion(c);
  c.threads = 3;
  const auto r3 = run_diffusion(c);
  CHECK(report_csv(r1) == report_csv(r3));
  CHECK(report_csv(run_diffusion(small_config())) == report_csv(r1));
  REQUIRE(r1.angles.size() == 6);
  for (const auto& a : r1.angles) {
    CHECK(a.ok);
    CHECK(a.theta == sample_angle(17, a.index, a.aborted));
    CHECK(a.series.size() == c.schedule().size());
    for (std::size_t k = 1; k < a.series.size(); ++k) CHECK(a.series[k].running_max >= a.series[k - 1].running_max);
    CHECK(a.fit.slope > 0);
    CHECK(a.fit.slope < 1.05);
  }
}

TEST_CASE("corridor direction is ballistic") {
  auto c = small_config();
  c.t_max = 1e6;
  c.angle_count = 1;
  c.theta = kPi / 2;
  const auto r = run_diffusion(c);
  CHECK(r.exponent.median == doctest::Approx(1.0).epsilon(0.01));
  const auto d = run_deviation_spectrum(c);
  CHECK(d.of("f").median == doctest::Approx(1.0).epsilon(0.01));
  CHECK(d.of("h_total").median == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("corner directions exhaust the retries") {
  auto c = small_config();
  c.theta = kPi / 4;  // through the corner (0.75, 0.25)
  CHECK_THROWS_AS(run_diffusion(c), Error);
  try {
    run_diffusion(c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RetryExhausted);
  }
}

TEST_CASE("deviation spectrum") {
  auto c = small_config();
  c.t_max = 1e5;
  const auto r = run_deviation_spectrum(c);
  REQUIRE(r.classes.size() == 5);
  CHECK(r.of("h_total").median == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.of("f").median > 0.3);
  CHECK(r.of("f").median < 1.0);
  CHECK_THROWS_AS(r.of("nope"), Error);
  c.threads = 2;
  CHECK(report_csv(run_deviation_spectrum(c)) == report_csv(r));
}

TEST_CASE("lyapunov run") {
  auto c = small_config();
  c.angle_count = 2;
  c.lyapunov_steps = 50000;
  const auto r = run_lyapunov(c);
  CHECK(r.summary.trivial_top == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::fabs(r.summary.second_or_top[Character{1, -1}.index()] - 2.0 / 3) < 0.05);
  c.threads = 2;
  CHECK(report_csv(run_lyapunov(c)) == report_csv(r));
  c.lyapunov_steps = 0;
  CHECK_THROWS_AS(run_lyapunov(c), Error);
}

TEST_CASE("consistency suite and the sheet-toggle mutation") {
  auto c = small_config();
  c.consistency_cases = 10;
  c.consistency_events = 20000;
  const auto ok = run_consistency(c);
  for (const auto& chk : ok.checks) {
    INFO(chk.name << ": " << chk.detail);
    CHECK(chk.passed);
  }
  CHECK(ok.passed());
  c.mutate_sheet_toggles = true;
  const auto bad = run_consistency(c);
  CHECK_FALSE(bad.passed());
  CHECK_FALSE(bad.checks[0].passed);
}

TEST_CASE("outputs on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "windtree_test_outputs";
  std::filesystem::remove_all(dir);
  auto c = small_config();
  c.angle_count = 3;
  c.output = dir.string();
  const auto r = run_diffusion(c);
  write_outputs(r, 1.5);
  const auto report = slurp(dir / "report.csv");
  CHECK(report.rfind("angle_index,theta,exponent,stderr,events,aborted\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "series_0.csv"));
  CHECK(slurp(dir / "series_2.csv").rfind("T,d,running_max\n", 0) == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["version"] == kVersion);
  CHECK(m["seed"] == 17);
  CHECK(m["config"]["angle_count"] == 3);
  write_outputs(run_diffusion(c), 1.5);
  CHECK(slurp(dir / "report.csv") == report);

  // A directory below a regular file cannot be created.
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "plain") << "x";
  auto blocked = r;
  blocked.config.output = (dir / "plain" / "sub").string();
  CHECK_THROWS_AS(write_outputs(blocked, 0), Error);
  std::filesystem::remove_all(dir);
}
