#ifndef WINDTREE_H
#define WINDTREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WT_API __declspec(dllexport)
#else
#define WT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1..13 mirror windtree::ErrorCode. */
typedef enum wt_status {
  WT_OK = 0,
  WT_DOMAIN_ERROR = 1,
  WT_CORNER_HIT = 2,
  WT_GLUING_ERROR = 3,
  WT_NON_CLOSED_CURVE = 4,
  WT_NOT_SQUARE_FREE = 5,
  WT_SADDLE_CONNECTION = 6,
  WT_NON_RETURNING = 7,
  WT_TIE_BREAK = 8,
  WT_DEGENERATE = 9,
  WT_INSUFFICIENT_DATA = 10,
  WT_RETRY_EXHAUSTED = 11,
  WT_INVALID_ARGUMENT = 12,
  WT_IO_ERROR = 13,
  WT_INTERNAL_ERROR = 100
} wt_status;

typedef enum wt_surface_kind { WT_SURFACE_X = 0, WT_SURFACE_L = 1, WT_SURFACE_TORUS = 2 } wt_surface_kind;

typedef struct wt_table wt_table;
typedef struct wt_particle wt_particle;
typedef struct wt_surface wt_surface;
typedef struct wt_iet wt_iet;
typedef struct wt_config wt_config;
typedef struct wt_report wt_report;

WT_API const char* wt_version(void);
WT_API const char* wt_status_name(wt_status status);
/* Message of the last failed call on this thread ("" if none). */
WT_API const char* wt_last_error(void);

/* String outputs: `needed` receives the length including the terminating
 * NUL. Passing buf == NULL only queries the size; a non-null buffer smaller
 * than needed yields WT_INVALID_ARGUMENT. */

/* Tables */
WT_API wt_status wt_table_create(double a, double b, wt_table** out);
WT_API wt_status wt_table_create_veech(int64_t x_num, int64_t x_den, int64_t y_num, int64_t y_den, int64_t D,
                                       wt_table** out);
WT_API wt_status wt_table_params(const wt_table* table, double* a, double* b);
WT_API void wt_table_destroy(wt_table* table);

/* Billiard particles */
WT_API wt_status wt_particle_create(const wt_table* table, double x, double y, double theta, int sx, int sy,
                                    wt_particle** out);
/* Flows for time T. On WT_CORNER_HIT the particle is left unchanged. */
WT_API wt_status wt_particle_advance(wt_particle* p, double T, uint64_t* events);
WT_API wt_status wt_particle_position(const wt_particle* p, double* x, double* y);
/* Distance from the creation point. */
WT_API wt_status wt_particle_displacement(const wt_particle* p, double* d);
WT_API void wt_particle_destroy(wt_particle* p);

/* Lattice level <f, gamma_T> of the trajectory from (x, y) in direction theta. */
WT_API wt_status wt_track_intersection(const wt_table* table, double x, double y, double theta, double T,
                                       int64_t level[2]);

/* Translation surfaces */
WT_API wt_status wt_surface_create(const wt_table* table, wt_surface_kind kind, wt_surface** out);
WT_API wt_status wt_surface_genus(const wt_surface* s, int* genus);
/* Cone angles of the vertex classes, ascending. */
WT_API wt_status wt_surface_cone_angles(const wt_surface* s, double* angles, size_t cap, size_t* count);
WT_API wt_status wt_surface_dump(const wt_surface* s, char* buf, size_t cap, size_t* needed);
WT_API void wt_surface_destroy(wt_surface* s);

/* Labelled interval exchanges */
WT_API wt_status wt_iet_create(const wt_surface* s, double theta, wt_iet** out);
WT_API wt_status wt_iet_size(const wt_iet* iet, size_t* d);
/* Each array holds d entries. Labels are deck element indices 0..3. */
WT_API wt_status wt_iet_data(const wt_iet* iet, double* lengths, int* top, int* bottom, int* labels);
/* Full spectrum of the four twisted cocycles after `steps` Zorich steps:
 * exponents[c * d + k] for characters c = ++, +-, -+, -- (descending k). */
WT_API wt_status wt_iet_spectrum(const wt_iet* iet, uint64_t steps, uint64_t seed, double* exponents, size_t cap);
WT_API void wt_iet_destroy(wt_iet* iet);

/* Experiment configuration */
WT_API wt_status wt_config_create(wt_config** out);
WT_API wt_status wt_config_set_table(wt_config* c, double a, double b);
WT_API wt_status wt_config_set_veech(wt_config* c, int64_t x_num, int64_t x_den, int64_t y_num, int64_t y_den,
                                     int64_t D);
WT_API wt_status wt_config_set_angles(wt_config* c, int count);
WT_API wt_status wt_config_set_theta(wt_config* c, double theta);
WT_API wt_status wt_config_set_tmax(wt_config* c, double t_max);
WT_API wt_status wt_config_set_schedule(wt_config* c, double t_min, double ratio, double fit_window_fraction);
WT_API wt_status wt_config_set_seed(wt_config* c, uint64_t seed);
WT_API wt_status wt_config_set_threads(wt_config* c, int threads);
WT_API wt_status wt_config_set_output(wt_config* c, const char* dir);
WT_API wt_status wt_config_set_lyapunov_steps(wt_config* c, uint64_t steps);
WT_API wt_status wt_config_set_consistency(wt_config* c, int cases, uint64_t events);
WT_API wt_status wt_config_set_mutation(wt_config* c, int swap_sheet_toggles);
WT_API wt_status wt_config_validate(const wt_config* c);
WT_API void wt_config_destroy(wt_config* c);

/* Experiment runs */
WT_API wt_status wt_run_diffusion(const wt_config* c, wt_report** out);
WT_API wt_status wt_run_deviations(const wt_config* c, wt_report** out);
WT_API wt_status wt_run_lyapunov(const wt_config* c, wt_report** out);
WT_API wt_status wt_run_consistency(const wt_config* c, wt_report** out);

/* Named scalar from a report, e.g. "median", "iqr", "f.median", "nu.+-",
 * "trivial_top", "sum_pp_mm". WT_INVALID_ARGUMENT for unknown names. */
WT_API wt_status wt_report_value(const wt_report* r, const char* name, double* value);
/* 1 when every check of a consistency report passed. Other reports: 1. */
WT_API wt_status wt_report_passed(const wt_report* r, int* passed);
WT_API wt_status wt_report_csv(const wt_report* r, char* buf, size_t cap, size_t* needed);
/* Human-readable summary lines. */
WT_API wt_status wt_report_summary(const wt_report* r, char* buf, size_t cap, size_t* needed);
/* Writes report.csv, manifest.json and series files to the configured output. */
WT_API wt_status wt_report_write(const wt_report* r);
WT_API void wt_report_destroy(wt_report* r);

#ifdef __cplusplus
}
#endif

#endif
