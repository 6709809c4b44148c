/*
 * Copyright 2026 The tdmac-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TDMAC_TDMAC_H
#define TDMAC_TDMAC_H

/*
 * C interface to the time-domain MAC macro simulator.
 *
 * Every function returns a tdmac_status (0 on success). On failure a
 * human-readable message for the calling thread is available from
 * tdmac_last_error() until the next failing call on that thread.
 * Objects are opaque handles released with their *_free function; passing a
 * null handle to *_free is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TDMAC_BUILDING_LIBRARY)
#    define TDMAC_API __declspec(dllexport)
#  else
#    define TDMAC_API __declspec(dllimport)
#  endif
#else
#  define TDMAC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tdmac_status {
  TDMAC_OK = 0,
  TDMAC_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, bad size */
  TDMAC_ERR_CONFIG = 2,           /* unreadable or invalid configuration */
  TDMAC_ERR_OPERANDS = 3,         /* code out of range, length mismatch */
  TDMAC_ERR_RANGE = 4,            /* numeric argument outside the domain */
  TDMAC_ERR_CUTOFF = 5,           /* delay cell starved to cutoff */
  TDMAC_ERR_DEGENERATE = 6,       /* not enough data for a fit */
  TDMAC_ERR_IO = 7,               /* file could not be written */
  TDMAC_ERR_BUFFER_TOO_SMALL = 8, /* caller buffer too small; see *needed */
  TDMAC_ERR_INTERNAL = 99
} tdmac_status;

typedef enum tdmac_arch { TDMAC_ARCH_CASCADE = 0, TDMAC_ARCH_COUNTER = 1 } tdmac_arch;

typedef enum tdmac_sampling_mode {
  TDMAC_SAMPLING_DIAGONAL = 0,   /* inputs = weights = [c,...,c], c = 0..15 */
  TDMAC_SAMPLING_EXHAUSTIVE = 1, /* all 16^(2n) vectors, n <= 2 */
  TDMAC_SAMPLING_RANDOM = 2      /* `count` uniform vectors from `seed` */
} tdmac_sampling_mode;

typedef struct tdmac_params tdmac_params;
typedef struct tdmac_engine tdmac_engine;
typedef struct tdmac_transfer tdmac_transfer;

typedef struct tdmac_sampling {
  int mode; /* tdmac_sampling_mode */
  uint32_t n;
  uint64_t count;
  uint64_t seed;
} tdmac_sampling;

typedef struct tdmac_readout {
  int arch; /* tdmac_arch */
  uint64_t d_out;
  double t_acc;   /* s */
  int64_t oracle;
  double latency; /* s */
  double energy;  /* J */
  uint32_t n_saturated;
} tdmac_readout;

typedef struct tdmac_transfer_record {
  int arch;
  int64_t oracle;
  uint64_t d_out;
  double t_acc;
  int saturated;
} tdmac_transfer_record;

typedef struct tdmac_linearity {
  double gain;
  double offset;
  double inl_max;
  double rms_error;
  double r_squared;
} tdmac_linearity;

typedef struct tdmac_noise_stats {
  uint64_t sample_count;
  double empirical_variance;
  double predicted_variance;
  double ratio;
} tdmac_noise_stats;

typedef struct tdmac_thermal_stats {
  uint64_t sample_count;
  double sigma_observed;
  double sigma_predicted;
  double v_nominal;
} tdmac_thermal_stats;

typedef struct tdmac_energy {
  double p_analog;
  double p_digital;
  double p_total;
  double energy_per_mac;
  int32_t ops_per_cycle;
  double f_op;
  double f_op_max;
  double tops_per_watt;
  int p_total_calibrated;
  int ops_back_solved;
  const char* ops_convention; /* static string */
} tdmac_energy;

TDMAC_API const char* tdmac_version(void);
TDMAC_API const char* tdmac_status_string(int status);
TDMAC_API const char* tdmac_last_error(void);

/* Parameters ------------------------------------------------------------ */

TDMAC_API int tdmac_params_default(tdmac_params** out);
/* Keys absent from the file keep their default values. */
TDMAC_API int tdmac_params_load(const char* path, tdmac_params** out);
TDMAC_API int tdmac_params_clone(const tdmac_params* params, tdmac_params** out);
TDMAC_API void tdmac_params_free(tdmac_params* params);
/* Merges a JSON object of overrides; unknown keys fail with TDMAC_ERR_CONFIG. */
TDMAC_API int tdmac_params_apply_json(tdmac_params* params, const char* json);
/* Writes the full configuration as JSON, NUL-terminated. */
TDMAC_API int tdmac_params_to_json(const tdmac_params* params, char* buf,
                                   size_t len, size_t* needed);
TDMAC_API int tdmac_params_save(const tdmac_params* params, const char* path);
TDMAC_API int tdmac_params_set_seed(tdmac_params* params, uint64_t seed);
TDMAC_API int tdmac_params_get_seed(const tdmac_params* params, uint64_t* seed);
/* Replaces the delay model with its least-squares line (beta = gamma = 0). */
TDMAC_API int tdmac_params_linearize_delay(tdmac_params* params);
/* Violations joined by '\n' into buf; *count receives how many. Returns
 * TDMAC_OK even when violations exist. */
TDMAC_API int tdmac_params_validate(const tdmac_params* params, size_t* count,
                                    char* buf, size_t len, size_t* needed);

/* Engine ---------------------------------------------------------------- */

TDMAC_API int tdmac_engine_create(const tdmac_params* params, uint64_t stream,
                                  tdmac_engine** out);
TDMAC_API void tdmac_engine_free(tdmac_engine* engine);
/* trace_csv_path may be NULL. */
TDMAC_API int tdmac_engine_run(tdmac_engine* engine, int arch,
                               const uint32_t* inputs, const uint32_t* weights,
                               size_t n, const char* trace_csv_path,
                               tdmac_readout* out);
/* Capacitor voltages left by the last run; *n receives the cell count. */
TDMAC_API int tdmac_engine_capacitors(const tdmac_engine* engine, double* buf,
                                      size_t len, size_t* n);

TDMAC_API int tdmac_latency_model(const tdmac_params* params, int arch,
                                  uint32_t n, double* out);
TDMAC_API int tdmac_pulse_duration(uint32_t code, double t_clk, double* out);
/* Steps the pulse generator `cycles` times with enable held high. */
TDMAC_API int tdmac_pulsegen_write_csv(uint32_t code, uint32_t cycles,
                                       const char* path);

/* Transfer curves and metrics ------------------------------------------- */

TDMAC_API int tdmac_transfer_run(const tdmac_params* params, int arch,
                                 const tdmac_sampling* sampling, uint32_t workers,
                                 tdmac_transfer** out);
TDMAC_API void tdmac_transfer_free(tdmac_transfer* transfer);
TDMAC_API size_t tdmac_transfer_size(const tdmac_transfer* transfer);
TDMAC_API int tdmac_transfer_get(const tdmac_transfer* transfer, size_t index,
                                 tdmac_transfer_record* out);
TDMAC_API int tdmac_transfer_linearity(const tdmac_transfer* transfer,
                                       tdmac_linearity* out);
TDMAC_API int tdmac_transfer_write_csv(const tdmac_transfer* transfer,
                                       const char* path);
TDMAC_API int tdmac_linearity_write_csv(const tdmac_transfer* transfer,
                                        const char* path);

/* noise_csv_path may be NULL. */
TDMAC_API int tdmac_quantization_stats(const tdmac_params* params, uint32_t n_cells,
                                       uint64_t trials, const char* noise_csv_path,
                                       tdmac_noise_stats* out);
TDMAC_API int tdmac_thermal_monte_carlo(const tdmac_params* params,
                                        uint64_t samples, tdmac_thermal_stats* out);

/* ops_per_cycle <= 0 selects 2n; forced_p_total <= 0 uses the model power;
 * worst_case != 0 uses full-scale operands for the analog power. */
TDMAC_API int tdmac_energy_report(const tdmac_params* params, int arch, uint32_t n,
                                  double f_op, int32_t ops_per_cycle,
                                  double forced_p_total, int worst_case,
                                  tdmac_energy* out);
TDMAC_API int tdmac_energy_write_csv(const tdmac_energy* report, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* TDMAC_TDMAC_H */
