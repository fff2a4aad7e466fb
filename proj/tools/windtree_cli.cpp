// Command-line driver for the wind-tree experiments. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "windtree/windtree.h"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct Options {
  double a = 0.5;
  double b = 0.5;
  std::vector<std::string> veech;
  int angles = 64;
  double tmax = 1e7;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 1;
  std::optional<double> theta;
  std::uint64_t steps = 1'000'000;
  std::uint64_t iet_steps = 0;
  int cases = 100;
  std::uint64_t events = 100'000;
  bool mutate = false;
  std::string surface = "L";
};

bool is_config_error(wt_status s) {
  return s == WT_DOMAIN_ERROR || s == WT_INVALID_ARGUMENT || s == WT_NOT_SQUARE_FREE || s == WT_INSUFFICIENT_DATA;
}

struct Failure {
  int code;
};

void check(wt_status s, const char* what) {
  if (s == WT_OK) return;
  std::cerr << what << ": " << wt_status_name(s) << ": " << wt_last_error() << "\n";
  throw Failure{is_config_error(s) ? kExitConfig : kExitCheckFailed};
}

void parse_rational(const std::string& text, std::int64_t& num, std::int64_t& den) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    num = std::stoll(text.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? text.size() : slash)) throw std::invalid_argument(text);
    den = slash == std::string::npos ? 1 : std::stoll(text.substr(slash + 1), &used);
    if (slash != std::string::npos && used != text.size() - slash - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    std::cerr << "not a rational number: " << text << "\n";
    throw Failure{kExitConfig};
  }
}

wt_config* make_config(const Options& o) {
  wt_config* c = nullptr;
  check(wt_config_create(&c), "config");
  if (o.veech.empty()) {
    check(wt_config_set_table(c, o.a, o.b), "--a/--b");
  } else {
    std::int64_t xn, xd, yn, yd, D, one;
    parse_rational(o.veech[0], xn, xd);
    parse_rational(o.veech[1], yn, yd);
    parse_rational(o.veech[2], D, one);
    if (one != 1) {
      std::cerr << "D must be an integer\n";
      throw Failure{kExitConfig};
    }
    check(wt_config_set_veech(c, xn, xd, yn, yd, D), "--veech");
  }
  check(wt_config_set_angles(c, o.angles), "--angles");
  check(wt_config_set_tmax(c, o.tmax), "--tmax");
  check(wt_config_set_seed(c, o.seed), "--seed");
  check(wt_config_set_threads(c, o.threads), "--threads");
  check(wt_config_set_output(c, o.out.c_str()), "--out");
  if (o.theta) check(wt_config_set_theta(c, *o.theta), "--theta");
  check(wt_config_set_lyapunov_steps(c, o.steps), "--steps");
  check(wt_config_set_consistency(c, o.cases, o.events), "--cases/--events");
  check(wt_config_set_mutation(c, o.mutate ? 1 : 0), "--mutate");
  check(wt_config_validate(c), "config");
  return c;
}

void print_summary(const wt_report* r) {
  std::size_t n = 0;
  check(wt_report_summary(r, nullptr, 0, &n), "summary");
  std::string text(n, '\0');
  check(wt_report_summary(r, text.data(), n, &n), "summary");
  text.resize(n - 1);
  std::cout << text;
}

int run_experiment(const Options& o, wt_status (*fn)(const wt_config*, wt_report**), const char* name) {
  wt_config* c = make_config(o);
  wt_report* r = nullptr;
  const wt_status s = fn(c, &r);
  wt_config_destroy(c);
  check(s, name);
  int passed = 1;
  try {
    print_summary(r);
    check(wt_report_write(r), "write");
    check(wt_report_passed(r, &passed), "report");
  } catch (...) {
    wt_report_destroy(r);
    throw;
  }
  wt_report_destroy(r);
  return passed ? 0 : kExitCheckFailed;
}

int run_iet(const Options& o) {
  if (!o.theta) {
    std::cerr << "iet: --theta is required\n";
    return kExitConfig;
  }
  wt_table* t = nullptr;
  if (o.veech.empty()) {
    check(wt_table_create(o.a, o.b, &t), "--a/--b");
  } else {
    std::int64_t xn, xd, yn, yd, D, one;
    parse_rational(o.veech[0], xn, xd);
    parse_rational(o.veech[1], yn, yd);
    parse_rational(o.veech[2], D, one);
    check(wt_table_create_veech(xn, xd, yn, yd, D, &t), "--veech");
  }
  wt_surface_kind kind = WT_SURFACE_L;
  if (o.surface == "X") kind = WT_SURFACE_X;
  else if (o.surface == "torus") kind = WT_SURFACE_TORUS;
  wt_surface* s = nullptr;
  wt_iet* iet = nullptr;
  const wt_status st = wt_surface_create(t, kind, &s);
  wt_table_destroy(t);
  check(st, "surface");
  const wt_status si = wt_iet_create(s, *o.theta, &iet);
  wt_surface_destroy(s);
  check(si, "iet");
  std::size_t d = 0;
  check(wt_iet_size(iet, &d), "iet");
  std::vector<double> len(d);
  std::vector<int> top(d), bottom(d), labels(d);
  check(wt_iet_data(iet, len.data(), top.data(), bottom.data(), labels.data()), "iet");
  std::printf("intervals %zu\n", d);
  std::printf("symbol,length,top_position,bottom_position,label\n");
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t tp = 0, bp = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (top[i] == static_cast<int>(k)) tp = i;
      if (bottom[i] == static_cast<int>(k)) bp = i;
    }
    static const char* names[] = {"00", "01", "10", "11"};
    std::printf("%zu,%.17g,%zu,%zu,%s\n", k, len[k], tp, bp, names[labels[k]]);
  }
  if (o.iet_steps > 0) {
    std::vector<double> ex(4 * d);
    const wt_status sp = wt_iet_spectrum(iet, o.iet_steps, o.seed, ex.data(), ex.size());
    if (sp != WT_OK) wt_iet_destroy(iet);
    check(sp, "spectrum");
    static const char* chars[] = {"++", "+-", "-+", "--"};
    for (std::size_t c = 0; c < 4; ++c) {
      std::printf("spectrum %s", chars[c]);
      for (std::size_t k = 0; k < d; ++k) std::printf(" %.6f", ex[c * d + k]);
      std::printf("\n");
    }
  }
  wt_iet_destroy(iet);
  return 0;
}

void common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--a", o.a, "scatterer width");
  sub->add_option("--b", o.b, "scatterer height");
  sub->add_option("--veech", o.veech, "Veech parameters x y D (x, y rational)")->expected(3);
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

void experiment_flags(CLI::App* sub, Options& o) {
  common_flags(sub, o);
  sub->add_option("--angles", o.angles, "number of sampled directions")->check(CLI::PositiveNumber);
  sub->add_option("--tmax", o.tmax, "final flow time");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--theta", o.theta, "use this direction for every angle slot");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wind-tree billiard experiments"};
  app.require_subcommand(1);
  Options o;

  auto* diffuse = app.add_subcommand("diffuse", "displacement growth exponent over sampled directions");
  experiment_flags(diffuse, o);
  auto* deviations = app.add_subcommand("deviations", "growth of cocycle pairings along trajectories");
  experiment_flags(deviations, o);
  auto* lyapunov = app.add_subcommand("lyapunov", "twisted Lyapunov spectrum by character");
  experiment_flags(lyapunov, o);
  lyapunov->add_option("--steps", o.steps, "Zorich steps per direction");
  auto* chk = app.add_subcommand("check", "consistency suite");
  experiment_flags(chk, o);
  chk->add_option("--cases", o.cases, "random cases per check")->check(CLI::PositiveNumber);
  chk->add_option("--events", o.events, "events per displacement-bound case");
  chk->add_flag("--mutate", o.mutate, "swap the sheet toggles (fault injection)");
  auto* iet = app.add_subcommand("iet", "first-return interval exchange of a direction");
  common_flags(iet, o);
  iet->add_option("--theta", o.theta, "flow direction in (0, pi/2)")->required();
  iet->add_option("--surface", o.surface, "L, X or torus")->check(CLI::IsMember({"L", "X", "torus"}));
  iet->add_option("--steps", o.iet_steps, "Zorich steps for the spectrum (0 skips it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*diffuse) return run_experiment(o, wt_run_diffusion, "diffuse");
    if (*deviations) return run_experiment(o, wt_run_deviations, "deviations");
    if (*lyapunov) return run_experiment(o, wt_run_lyapunov, "lyapunov");
    if (*chk) return run_experiment(o, wt_run_consistency, "check");
    return run_iet(o);
  } catch (const Failure& f) {
    return f.code;
  }
}
