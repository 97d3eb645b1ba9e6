/* SPDX-License-Identifier: Apache-2.0 */
#ifndef MCFLOW_H
#define MCFLOW_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MCFLOW_BUILDING)
#    define MCF_API __declspec(dllexport)
#  else
#    define MCF_API __declspec(dllimport)
#  endif
#else
#  define MCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcf_status {
  MCF_OK = 0,
  MCF_ERR_INTERNAL = 1,
  MCF_ERR_VALIDATION = 2,
  MCF_ERR_NUMERICAL = 3,
  MCF_ERR_VIOLATION = 4, /* strict-mode monitor violation */
  MCF_ERR_IO = 5
} mcf_status;

/* Parsed and validated run configuration. */
typedef struct mcf_config mcf_config;

/* JSON document produced by an operation. */
typedef struct mcf_report mcf_report;

typedef struct mcf_condition {
  double C;
  int admissible;
  double delta;
  double sup_d2;
  double sup_d_boundary;
} mcf_condition;

MCF_API const char* mcf_version(void);

/* Message of the last failed call on this thread; "" after a success. */
MCF_API const char* mcf_last_error(void);

MCF_API mcf_status mcf_config_parse(const char* text, mcf_config** out);
MCF_API mcf_status mcf_config_load(const char* path, mcf_config** out);
MCF_API void mcf_config_free(mcf_config* config);

/* Canonical config text. Copies at most `capacity` bytes including the
 * terminator; `needed` (optional) receives the full size with terminator. */
MCF_API mcf_status mcf_config_to_text(const mcf_config* config, char* buffer, size_t capacity,
                                      size_t* needed);

/* Overrides [output] dir. */
MCF_API mcf_status mcf_config_set_output_dir(mcf_config* config, const char* dir);

MCF_API const char* mcf_report_json(const mcf_report* report);
MCF_API void mcf_report_free(mcf_report* report);

/* `report` may be NULL in every call below. On MCF_ERR_NUMERICAL and
 * MCF_ERR_VIOLATION from mcf_run the report is still produced. */
MCF_API mcf_status mcf_check_condition(const mcf_config* config, mcf_condition* out,
                                       mcf_report** report);
MCF_API mcf_status mcf_run(const mcf_config* config, int workers, mcf_report** report);
MCF_API mcf_status mcf_residual_config(const mcf_config* config, int workers, double* out,
                                       mcf_report** report);
MCF_API mcf_status mcf_residual_snapshot(const char* path, int workers, double* out,
                                         mcf_report** report);
MCF_API mcf_status mcf_cone_analyze(double R, double r_min, double h, int levels, int workers,
                                    mcf_report** report);
MCF_API mcf_status mcf_list_scenarios(mcf_report** report);
/* svg_path may be NULL: writes <quantity>.svg next to the CSV. */
MCF_API mcf_status mcf_plot(const char* csv_path, const char* quantity, const char* svg_path,
                            mcf_report** report);

#ifdef __cplusplus
}
#endif

#endif
