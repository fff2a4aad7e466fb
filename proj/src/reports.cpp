#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "windtree/experiments.hpp"

namespace windtree {

namespace {

using nlohmann::json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json quartiles_json(const Quartiles& q) {
  auto v = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"q1", v(q.q1)}, {"median", v(q.median)}, {"q3", v(q.q3)}};
}

json config_json(const ExperimentConfig& c) {
  json j = {{"a", c.a},
            {"b", c.b},
            {"angle_count", c.angle_count},
            {"t_min", c.t_min},
            {"t_max", c.t_max},
            {"schedule_ratio", c.schedule_ratio},
            {"seed", c.seed},
            {"fit_window_fraction", c.fit_window_fraction},
            {"max_retries", c.max_retries},
            {"lyapunov_steps", c.lyapunov_steps},
            {"consistency_cases", c.consistency_cases},
            {"consistency_events", c.consistency_events},
            {"mutate_sheet_toggles", c.mutate_sheet_toggles}};
  if (c.veech) {
    const auto& v = *c.veech;
    j["veech"] = {{"x", {v.x.num, v.x.den}}, {"y", {v.y.num, v.y.den}}, {"D", v.D}};
  }
  if (c.theta) j["theta"] = *c.theta;
  return j;
}

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json manifest_base(const ExperimentConfig& c, const char* kind, double wall_seconds) {
  const TableParams t = c.table();
  return {{"experiment", kind},     {"version", kVersion},          {"seed", c.seed},
          {"config", config_json(c)}, {"config_hash", hex(c.hash())}, {"table", {{"a", t.a}, {"b", t.b}}},
          {"threads", c.threads},   {"wall_seconds", wall_seconds}};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) fail(ErrorCode::IoError, "cannot write " + p.string());
}

std::filesystem::path prepare(const ExperimentConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.output, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + c.output + ": " + ec.message());
  return c.output;
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_json(*this).dump(); }

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string report_csv(const DiffusionReport& r) {
  std::ostringstream os;
  os << "angle_index,theta,exponent,stderr,events,aborted\n";
  for (const auto& a : r.angles)
    os << a.index << ',' << num(a.theta) << ',' << (a.ok ? num(a.fit.slope) : "nan") << ','
       << (a.ok ? num(a.fit.std_error) : "nan") << ',' << a.events << ',' << a.aborted << '\n';
  return os.str();
}

std::string report_csv(const DeviationReport& r) {
  std::ostringstream os;
  os << "angle_index,theta";
  for (const auto& c : r.classes) os << ',' << c.name << ',' << c.name << "_stderr";
  os << ",walls,aborted\n";
  for (const auto& a : r.angles) {
    os << a.index << ',' << num(a.theta);
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
      if (a.ok)
        os << ',' << num(a.fits[c].slope) << ',' << num(a.fits[c].std_error);
      else
        os << ",nan,nan";
    }
    os << ',' << a.walls << ',' << a.aborted << '\n';
  }
  return os.str();
}

std::string report_csv(const LyapunovReport& r) {
  std::ostringstream os;
  os << "angle_index,theta,character,exponents,step_count,time,half_window_delta,seed\n";
  const auto& s = r.summary;
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    for (const auto& e : s.runs[i]) {
      os << i << ',' << num(s.angles[i]) << ',' << e.character.name() << ',';
      for (std::size_t k = 0; k < e.exponents.size(); ++k) os << (k ? " " : "") << num(e.exponents[k]);
      os << ',' << e.step_count << ',' << num(e.time) << ',' << num(e.half_window_delta) << ',' << e.seed << '\n';
    }
  }
  return os.str();
}

std::string report_csv(const ConsistencyReport& r) {
  std::ostringstream os;
  os << "check,passed,detail\n";
  for (const auto& c : r.checks) os << c.name << ',' << (c.passed ? 1 : 0) << ',' << c.detail << '\n';
  return os.str();
}

std::string series_csv(const AngleResult& a) {
  std::ostringstream os;
  os << "T,d,running_max\n";
  for (const auto& p : a.series) os << num(p.t) << ',' << num(p.value) << ',' << num(p.running_max) << '\n';
  return os.str();
}

void write_outputs(const DiffusionReport& r, double wall_seconds) {
  if (r.config.output.empty()) return;
  const auto dir = prepare(r.config);
  write_file(dir / "report.csv", report_csv(r));
  for (const auto& a : r.angles)
    if (a.ok) write_file(dir / ("series_" + std::to_string(a.index) + ".csv"), series_csv(a));
  json m = manifest_base(r.config, "diffuse", wall_seconds);
  m["exponent"] = quartiles_json(r.exponent);
  m["aborted_slots"] = r.aborted_slots;
  m["corner_hits"] = r.corner_hits;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

void write_outputs(const DeviationReport& r, double wall_seconds) {
  if (r.config.output.empty()) return;
  const auto dir = prepare(r.config);
  write_file(dir / "report.csv", report_csv(r));
  json m = manifest_base(r.config, "deviations", wall_seconds);
  for (std::size_t c = 0; c < r.classes.size(); ++c) m["exponent"][r.classes[c].name] = quartiles_json(r.exponent[c]);
  m["aborted_slots"] = r.aborted_slots;
  m["corner_hits"] = r.corner_hits;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

void write_outputs(const LyapunovReport& r, double wall_seconds) {
  if (r.config.output.empty()) return;
  const auto dir = prepare(r.config);
  write_file(dir / "report.csv", report_csv(r));
  const auto& s = r.summary;
  json m = manifest_base(r.config, "lyapunov", wall_seconds);
  for (const auto chi : all_characters()) m["median"][chi.name()] = s.second_or_top[chi.index()];
  m["trivial_top"] = s.trivial_top;
  m["sum_pp_mm"] = s.sum_pp_mm;
  m["sum_pp_pm"] = s.sum_pp_pm;
  m["sum_pp_mp"] = s.sum_pp_mp;
  m["resampled"] = s.resampled;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

void write_outputs(const ConsistencyReport& r, double wall_seconds) {
  if (r.config.output.empty()) return;
  const auto dir = prepare(r.config);
  write_file(dir / "report.csv", report_csv(r));
  json m = manifest_base(r.config, "check", wall_seconds);
  m["passed"] = r.passed();
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace windtree
