#include "windtree/windtree.h"

#include <chrono>
#include <cstring>
#include <new>
#include <sstream>
#include <string>
#include <variant>

#include "windtree/experiments.hpp"

using namespace windtree;

struct wt_table {
  TableParams t;
};
struct wt_particle {
  TableParams table;
  ParticleState start;
  ParticleState now;
};
struct wt_surface {
  PolygonalSurface s;
};
struct wt_iet {
  LabeledIET iet;
};
struct wt_config {
  ExperimentConfig c;
};
struct wt_report {
  std::variant<DiffusionReport, DeviationReport, LyapunovReport, ConsistencyReport> r;
  double wall_seconds = 0;
};

namespace {

thread_local std::string last_error;

template <class F>
wt_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return WT_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<wt_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WT_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WT_INTERNAL_ERROR;
  }
}

template <class... P>
void require(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) fail(ErrorCode::InvalidArgument, "null argument");
}

void copy_out(const std::string& text, char* buf, std::size_t cap, std::size_t* needed) {
  const std::size_t n = text.size() + 1;
  if (needed) *needed = n;
  if (!buf) return;
  if (cap < n) fail(ErrorCode::InvalidArgument, "buffer too small");
  std::memcpy(buf, text.c_str(), n);
}

Rational rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorCode::DomainError, "zero denominator");
  return {num, den};
}

template <class Report, class Run>
wt_status run(const wt_config* c, wt_report** out, Run&& fn) {
  return guard([&] {
    require(c, out);
    const auto t0 = std::chrono::steady_clock::now();
    Report rep = fn(c->c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *out = new wt_report{std::move(rep), wall};
  });
}

void put_quartiles(std::ostringstream& os, const Quartiles& q) {
  os << "median " << q.median << " q1 " << q.q1 << " q3 " << q.q3 << " iqr " << q.iqr();
}

bool quartile_value(const Quartiles& q, const std::string& key, double& v) {
  if (key == "median") v = q.median;
  else if (key == "q1") v = q.q1;
  else if (key == "q3") v = q.q3;
  else if (key == "iqr") v = q.iqr();
  else return false;
  return true;
}

struct ValueOf {
  const std::string& name;
  double& v;

  bool operator()(const DiffusionReport& r) const {
    if (name == "aborted_slots") return v = r.aborted_slots, true;
    if (name == "corner_hits") return v = r.corner_hits, true;
    return quartile_value(r.exponent, name, v);
  }
  bool operator()(const DeviationReport& r) const {
    if (name == "aborted_slots") return v = r.aborted_slots, true;
    if (name == "corner_hits") return v = r.corner_hits, true;
    const auto dot = name.find('.');
    if (dot == std::string::npos) return false;
    for (std::size_t k = 0; k < r.classes.size(); ++k)
      if (r.classes[k].name == name.substr(0, dot)) return quartile_value(r.exponent[k], name.substr(dot + 1), v);
    return false;
  }
  bool operator()(const LyapunovReport& r) const {
    const auto& s = r.summary;
    for (const auto chi : all_characters())
      if (name == std::string("nu.") + chi.name()) return v = s.second_or_top[chi.index()], true;
    if (name == "trivial_top") return v = s.trivial_top, true;
    if (name == "sum_pp_mm") return v = s.sum_pp_mm, true;
    if (name == "sum_pp_pm") return v = s.sum_pp_pm, true;
    if (name == "sum_pp_mp") return v = s.sum_pp_mp, true;
    if (name == "resampled") return v = static_cast<double>(s.resampled), true;
    return false;
  }
  bool operator()(const ConsistencyReport& r) const {
    if (name == "passed") return v = r.passed() ? 1 : 0, true;
    if (name == "checks") return v = static_cast<double>(r.checks.size()), true;
    return false;
  }
};

struct Summary {
  std::ostringstream& os;

  void table(const ExperimentConfig& c) const {
    const auto t = c.table();
    os << "table a " << t.a << " b " << t.b << " seed " << c.seed << "\n";
  }
  void operator()(const DiffusionReport& r) const {
    table(r.config);
    os << "diffusion angles " << r.angles.size() << " aborted " << r.aborted_slots << " corner_hits "
       << r.corner_hits << "\nexponent ";
    put_quartiles(os, r.exponent);
    os << "\n";
  }
  void operator()(const DeviationReport& r) const {
    table(r.config);
    os << "deviations angles " << r.angles.size() << " aborted " << r.aborted_slots << "\n";
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
      os << r.classes[k].name << " ";
      put_quartiles(os, r.exponent[k]);
      os << "\n";
    }
  }
  void operator()(const LyapunovReport& r) const {
    table(r.config);
    const auto& s = r.summary;
    os << "lyapunov angles " << s.angles.size() << " steps " << r.config.lyapunov_steps << " resampled "
       << s.resampled << "\n";
    for (const auto chi : all_characters()) os << "nu" << chi.name() << " " << s.second_or_top[chi.index()] << "\n";
    os << "trivial_top " << s.trivial_top << "\nsum ++/-- " << s.sum_pp_mm << "\nsum ++/+- " << s.sum_pp_pm
       << "\nsum ++/-+ " << s.sum_pp_mp << "\n";
  }
  void operator()(const ConsistencyReport& r) const {
    for (const auto& c : r.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << " " << c.detail << "\n";
  }
};

}  // namespace

extern "C" {

const char* wt_version(void) { return kVersion; }

const char* wt_status_name(wt_status status) {
  if (status == WT_INTERNAL_ERROR) return "InternalError";
  return error_code_name(static_cast<ErrorCode>(status));
}

const char* wt_last_error(void) { return last_error.c_str(); }

wt_status wt_table_create(double a, double b, wt_table** out) {
  return guard([&] {
    require(out);
    *out = new wt_table{make_table(a, b)};
  });
}

wt_status wt_table_create_veech(int64_t x_num, int64_t x_den, int64_t y_num, int64_t y_den, int64_t D,
                                wt_table** out) {
  return guard([&] {
    require(out);
    *out = new wt_table{veech_params(rational(x_num, x_den), rational(y_num, y_den), D)};
  });
}

wt_status wt_table_params(const wt_table* table, double* a, double* b) {
  return guard([&] {
    require(table, a, b);
    *a = table->t.a;
    *b = table->t.b;
  });
}

void wt_table_destroy(wt_table* table) { delete table; }

wt_status wt_particle_create(const wt_table* table, double x, double y, double theta, int sx, int sy,
                             wt_particle** out) {
  return guard([&] {
    require(table, out);
    if ((sx != 1 && sx != -1) || (sy != 1 && sy != -1)) fail(ErrorCode::InvalidArgument, "signs must be +1 or -1");
    const auto s = make_state(table->t, x, y, theta, sx, sy);
    *out = new wt_particle{table->t, s, s};
  });
}

wt_status wt_particle_advance(wt_particle* p, double T, uint64_t* events) {
  return guard([&] {
    require(p);
    if (!(T >= 0)) fail(ErrorCode::InvalidArgument, "time must be non-negative");
    std::uint64_t n = 0;
    p->now = advance(p->table, p->now, T, &n);
    if (events) *events = n;
  });
}

wt_status wt_particle_position(const wt_particle* p, double* x, double* y) {
  return guard([&] {
    require(p, x, y);
    const auto q = p->now.position();
    *x = static_cast<double>(q.x);
    *y = static_cast<double>(q.y);
  });
}

wt_status wt_particle_displacement(const wt_particle* p, double* d) {
  return guard([&] {
    require(p, d);
    *d = static_cast<double>(displacement(p->start, p->now));
  });
}

void wt_particle_destroy(wt_particle* p) { delete p; }

wt_status wt_track_intersection(const wt_table* table, double x, double y, double theta, double T,
                                int64_t level[2]) {
  return guard([&] {
    require(table, level);
    const auto lv = track_intersection(table->t, make_state(table->t, x, y, theta), T);
    level[0] = lv[0];
    level[1] = lv[1];
  });
}

wt_status wt_surface_create(const wt_table* table, wt_surface_kind kind, wt_surface** out) {
  return guard([&] {
    require(out);
    if (kind == WT_SURFACE_TORUS) {
      *out = new wt_surface{build_torus()};
      return;
    }
    require(table);
    if (kind == WT_SURFACE_X)
      *out = new wt_surface{build_surface_X(table->t)};
    else if (kind == WT_SURFACE_L)
      *out = new wt_surface{build_surface_L(table->t)};
    else
      fail(ErrorCode::InvalidArgument, "unknown surface kind");
  });
}

wt_status wt_surface_genus(const wt_surface* s, int* g) {
  return guard([&] {
    require(s, g);
    *g = genus(s->s);
  });
}

wt_status wt_surface_cone_angles(const wt_surface* s, double* angles, size_t cap, size_t* count) {
  return guard([&] {
    require(s);
    const auto a = cone_points(s->s);
    if (count) *count = a.size();
    if (!angles) return;
    if (cap < a.size()) fail(ErrorCode::InvalidArgument, "buffer too small");
    std::copy(a.begin(), a.end(), angles);
  });
}

wt_status wt_surface_dump(const wt_surface* s, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    require(s);
    copy_out(s->s.dump(), buf, cap, needed);
  });
}

void wt_surface_destroy(wt_surface* s) { delete s; }

wt_status wt_iet_create(const wt_surface* s, double theta, wt_iet** out) {
  return guard([&] {
    require(s, out);
    *out = new wt_iet{first_return_iet(s->s, theta)};
  });
}

wt_status wt_iet_size(const wt_iet* iet, size_t* d) {
  return guard([&] {
    require(iet, d);
    *d = static_cast<std::size_t>(iet->iet.size());
  });
}

wt_status wt_iet_data(const wt_iet* iet, double* lengths, int* top, int* bottom, int* labels) {
  return guard([&] {
    require(iet);
    const auto& x = iet->iet;
    for (int k = 0; k < x.size(); ++k) {
      if (lengths) lengths[k] = x.lengths[k];
      if (top) top[k] = x.top[k];
      if (bottom) bottom[k] = x.bottom[k];
      if (labels) labels[k] = x.labels[k].index();
    }
  });
}

wt_status wt_iet_spectrum(const wt_iet* iet, uint64_t steps, uint64_t seed, double* exponents, size_t cap) {
  return guard([&] {
    require(iet, exponents);
    const auto d = static_cast<std::size_t>(iet->iet.size());
    if (cap < 4 * d) fail(ErrorCode::InvalidArgument, "buffer too small");
    LyapunovConfig cfg;
    cfg.steps = steps;
    cfg.seed = seed;
    const auto est = twisted_spectrum(iet->iet, cfg);
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t k = 0; k < d; ++k) exponents[c * d + k] = est[c].exponents[k];
  });
}

void wt_iet_destroy(wt_iet* iet) { delete iet; }

wt_status wt_config_create(wt_config** out) {
  return guard([&] {
    require(out);
    *out = new wt_config{};
  });
}

wt_status wt_config_set_table(wt_config* c, double a, double b) {
  return guard([&] {
    require(c);
    make_table(a, b);
    c->c.a = a;
    c->c.b = b;
    c->c.veech.reset();
  });
}

wt_status wt_config_set_veech(wt_config* c, int64_t x_num, int64_t x_den, int64_t y_num, int64_t y_den, int64_t D) {
  return guard([&] {
    require(c);
    const VeechTriple v{rational(x_num, x_den), rational(y_num, y_den), D};
    veech_params(v.x, v.y, v.D);
    c->c.veech = v;
  });
}

wt_status wt_config_set_angles(wt_config* c, int count) {
  return guard([&] {
    require(c);
    if (count < 1) fail(ErrorCode::InvalidArgument, "angle count must be positive");
    c->c.angle_count = count;
  });
}

wt_status wt_config_set_theta(wt_config* c, double theta) {
  return guard([&] {
    require(c);
    c->c.theta = theta;
  });
}

wt_status wt_config_set_tmax(wt_config* c, double t_max) {
  return guard([&] {
    require(c);
    c->c.t_max = t_max;
  });
}

wt_status wt_config_set_schedule(wt_config* c, double t_min, double ratio, double fit_window_fraction) {
  return guard([&] {
    require(c);
    c->c.t_min = t_min;
    c->c.schedule_ratio = ratio;
    c->c.fit_window_fraction = fit_window_fraction;
  });
}

wt_status wt_config_set_seed(wt_config* c, uint64_t seed) {
  return guard([&] {
    require(c);
    c->c.seed = seed;
  });
}

wt_status wt_config_set_threads(wt_config* c, int threads) {
  return guard([&] {
    require(c);
    if (threads < 1) fail(ErrorCode::InvalidArgument, "thread count must be positive");
    c->c.threads = threads;
  });
}

wt_status wt_config_set_output(wt_config* c, const char* dir) {
  return guard([&] {
    require(c);
    c->c.output = dir ? dir : "";
  });
}

wt_status wt_config_set_lyapunov_steps(wt_config* c, uint64_t steps) {
  return guard([&] {
    require(c);
    c->c.lyapunov_steps = steps;
  });
}

wt_status wt_config_set_consistency(wt_config* c, int cases, uint64_t events) {
  return guard([&] {
    require(c);
    if (cases < 1 || events < 1) fail(ErrorCode::InvalidArgument, "cases and events must be positive");
    c->c.consistency_cases = cases;
    c->c.consistency_events = events;
  });
}

wt_status wt_config_set_mutation(wt_config* c, int swap_sheet_toggles) {
  return guard([&] {
    require(c);
    c->c.mutate_sheet_toggles = swap_sheet_toggles != 0;
  });
}

wt_status wt_config_validate(const wt_config* c) {
  return guard([&] {
    require(c);
    c->c.validate();
  });
}

void wt_config_destroy(wt_config* c) { delete c; }

wt_status wt_run_diffusion(const wt_config* c, wt_report** out) {
  return run<DiffusionReport>(c, out, run_diffusion);
}

wt_status wt_run_deviations(const wt_config* c, wt_report** out) {
  return run<DeviationReport>(c, out, [](const ExperimentConfig& cfg) { return run_deviation_spectrum(cfg); });
}

wt_status wt_run_lyapunov(const wt_config* c, wt_report** out) { return run<LyapunovReport>(c, out, run_lyapunov); }

wt_status wt_run_consistency(const wt_config* c, wt_report** out) {
  return run<ConsistencyReport>(c, out, run_consistency);
}

wt_status wt_report_value(const wt_report* r, const char* name, double* value) {
  return guard([&] {
    require(r, name, value);
    const std::string key = name;
    double v = 0;
    if (!std::visit(ValueOf{key, v}, r->r)) fail(ErrorCode::InvalidArgument, "unknown report value " + key);
    *value = v;
  });
}

wt_status wt_report_passed(const wt_report* r, int* passed) {
  return guard([&] {
    require(r, passed);
    const auto* c = std::get_if<ConsistencyReport>(&r->r);
    *passed = (c == nullptr || c->passed()) ? 1 : 0;
  });
}

wt_status wt_report_csv(const wt_report* r, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    require(r);
    copy_out(std::visit([](const auto& rep) { return report_csv(rep); }, r->r), buf, cap, needed);
  });
}

wt_status wt_report_summary(const wt_report* r, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    require(r);
    std::ostringstream os;
    std::visit(Summary{os}, r->r);
    copy_out(os.str(), buf, cap, needed);
  });
}

wt_status wt_report_write(const wt_report* r) {
  return guard([&] {
    require(r);
    std::visit([&](const auto& rep) { write_outputs(rep, r->wall_seconds); }, r->r);
  });
}

void wt_report_destroy(wt_report* r) { delete r; }

}  // extern "C"
