/* hartreescatter: C API for the pseudospectral nonlocal Schroedinger
 * simulation library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns an hs_status; HS_OK is zero. On failure a
 * thread-local message is available from hs_last_error(). Output handle
 * parameters are written only on success.
 */
#ifndef HARTREESCATTER_H
#define HARTREESCATTER_H

#include <stdint.h>

#if defined(_WIN32)
#define HS_API __declspec(dllexport)
#else
#define HS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
  HS_OK = 0,
  HS_ERR_INVALID_ARGUMENT = 1,
  HS_ERR_GRID_MISMATCH = 2,
  HS_ERR_IO = 3,
  HS_ERR_CONFIG = 4,
  HS_ERR_NUMERIC = 5,
  HS_ERR_INTERNAL = 6
} hs_status;

typedef struct hs_grid hs_grid;
typedef struct hs_field hs_field;
typedef struct hs_potential hs_potential;
typedef struct hs_trajectory hs_trajectory;

HS_API const char* hs_version(void);
HS_API const char* hs_status_name(hs_status status);
/* Message describing the most recent failure on this thread. */
HS_API const char* hs_last_error(void);

/* ---- grids -------------------------------------------------------- */

/* Periodic box [-L, L)^dim with points_per_axis samples per axis
 * (even, >= 8); dim in {1, 2, 3}. */
HS_API hs_status hs_grid_create(int dim, int points_per_axis, double half_length,
                                hs_grid** out);
HS_API void hs_grid_free(hs_grid* grid);
HS_API int hs_grid_dim(const hs_grid* grid);
HS_API int hs_grid_points_per_axis(const hs_grid* grid);
HS_API double hs_grid_half_length(const hs_grid* grid);
HS_API double hs_grid_spacing(const hs_grid* grid);
HS_API int64_t hs_grid_total_points(const hs_grid* grid);

/* ---- fields ------------------------------------------------------- */

HS_API hs_status hs_field_zero(const hs_grid* grid, hs_field** out);
/* amplitude * exp(-|x-center|^2/(2 width^2)) * exp(i velocity.x); center and
 * velocity may be NULL (origin / at rest), otherwise dim entries. */
HS_API hs_status hs_field_gaussian(const hs_grid* grid, double amplitude, double width,
                                   const double* center, const double* velocity,
                                   hs_field** out);
/* Seeded band-limited random data with L2 norm l2_norm, modes |k| <= band. */
HS_API hs_status hs_field_random(const hs_grid* grid, uint64_t seed, double band,
                                 double l2_norm, hs_field** out);
/* Interleaved re/im samples, row-major with the last axis fastest. */
HS_API hs_status hs_field_from_values(const hs_grid* grid, const double* interleaved,
                                      int64_t count_complex, double time, hs_field** out);
HS_API hs_status hs_field_copy_values(const hs_field* field, double* interleaved,
                                      int64_t capacity_complex);
HS_API hs_status hs_field_read(const char* path, hs_field** out);
HS_API hs_status hs_field_write(const hs_field* field, const char* path);
HS_API void hs_field_free(hs_field* field);
HS_API double hs_field_time(const hs_field* field);
HS_API hs_status hs_field_lp_norm(const hs_field* field, double r, double* out);
HS_API hs_status hs_field_h1_norm(const hs_field* field, double* out);
HS_API hs_status hs_field_mass(const hs_field* field, double* out);

/* ---- potentials ---------------------------------------------------- */

HS_API hs_status hs_potential_zero(const hs_grid* grid, hs_potential** out);
/* C |x|^{-gamma} with 0 < gamma < dim; truncate_outer = 0 means none. */
HS_API hs_status hs_potential_inverse_power(const hs_grid* grid, double C, double gamma,
                                            double truncate_outer, hs_potential** out);
HS_API void hs_potential_free(hs_potential* potential);
/* Periodic Riemann-sum convolution of the potential with a density field. */
HS_API hs_status hs_potential_convolve(const hs_potential* potential, const hs_field* rho,
                                       hs_field** out);
/* Energy split: total = kinetic + interaction. Any output may be NULL. */
HS_API hs_status hs_energy(const hs_field* field, const hs_potential* potential,
                           double* total, double* kinetic, double* interaction);

/* ---- evolution ------------------------------------------------------ */

HS_API hs_status hs_free_propagate(const hs_field* field, double t, hs_field** out);
/* Strang-split evolution from the field's time stamp to t_end; snapshots are
 * kept every `stride` steps. */
HS_API hs_status hs_strang_evolve(const hs_field* initial, const hs_potential* potential,
                                  double dt, double t_end, int stride, hs_trajectory** out);
HS_API void hs_trajectory_free(hs_trajectory* trajectory);
HS_API int hs_trajectory_snapshot_count(const hs_trajectory* trajectory);
HS_API hs_status hs_trajectory_snapshot(const hs_trajectory* trajectory, int index,
                                        hs_field** out);
HS_API hs_status hs_trajectory_write_csv(const hs_trajectory* trajectory, const char* path);

/* Finite-horizon forward wave operator: data U(T) u_plus integrated back to
 * t = 0 under the interacting flow. */
HS_API hs_status hs_wave_operator(const hs_field* u_plus, const hs_potential* potential,
                                  double T, double dt, hs_field** out);

/* ---- experiment harness --------------------------------------------- */

/* Runs the experiment described by a config file. out_dir (optional)
 * overrides the configured output directory, threads (<= 0 = auto) sizes the
 * sweep pool, seed (>= 0) overrides the data seed, expected_kind (optional)
 * must match the config's experiment kind. On success *checks_passed is 1
 * when every enabled check passed. Config errors return HS_ERR_CONFIG. */
HS_API hs_status hs_run_config(const char* config_path, const char* out_dir, int threads,
                               int64_t seed, const char* expected_kind, int* checks_passed);

#ifdef __cplusplus
}
#endif

#endif /* HARTREESCATTER_H */
