#ifndef SLABNET_H
#define SLABNET_H

/* Generated by cbindgen from the slabnet-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code for every fallible call in this API.
typedef enum SlabnetStatus {
  // Success.
  SLABNET_STATUS_OK = 0,
  // A required pointer argument was NULL.
  SLABNET_STATUS_NULL_POINTER = 1,
  // Invalid configuration or input (bad architecture, malformed data, ...).
  SLABNET_STATUS_INVALID_ARGUMENT = 2,
  // File or serialization failure.
  SLABNET_STATUS_IO = 3,
  // A statistical procedure failed to produce a usable estimate.
  SLABNET_STATUS_ESTIMATION = 4,
  // A string argument was not valid UTF-8.
  SLABNET_STATUS_UTF8 = 5,
  // Internal panic; the message holds the payload when available.
  SLABNET_STATUS_PANIC = 6,
} SlabnetStatus;

// Opaque certificate handle: the itemized PAC-Bayes risk bound.
typedef struct SlabnetCertificate SlabnetCertificate;

// Opaque sampler-output handle: kept posterior draws plus summaries.
typedef struct SlabnetChain SlabnetChain;

// Opaque training/test set handle.
typedef struct SlabnetDataset SlabnetDataset;

// Network shape: input dimension, depth, hidden width, sparsity (number of
// active coefficients), and the coefficient magnitude bound.
typedef struct SlabnetArch {
  uint32_t input_dim;
  // Number of layers excluding the input; at least 3.
  uint32_t depth;
  uint32_t width;
  uint32_t sparsity;
  // Magnitude bound `C_B >= 2`.
  double weight_bound;
} SlabnetArch;

// Metropolis–Hastings sampler settings for the Gibbs posterior at inverse
// temperature `lambda`.
typedef struct SlabnetChainOpts {
  // Inverse temperature; must be >= 0.
  double lambda;
  // Total steps per chain.
  uint64_t steps;
  // Discarded prefix; must be < steps.
  uint64_t burn_in;
  // Keep-every stride over post-burn-in steps; 0 is treated as 1.
  uint64_t thin;
  // Weight-move half-width; <= 0 selects the default `C_B / 10`.
  double step_size;
  // Probability of a support-swap move, in [0, 1).
  double swap_prob;
  uint64_t seed;
  // Independent chains merged in index order; 0 is treated as 1.
  uint32_t chains;
  // Nonzero ramps the inverse temperature from 0 to lambda over burn-in.
  uint8_t anneal_burn_in;
  // 0 samples the continuous slab; k >= 2 restricts coefficients to a
  // k-point grid (mainly for validation against exact enumeration).
  uint32_t quantized_levels;
} SlabnetChainOpts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the library version as a static NUL-terminated string.
const char *slabnet_version(void);

// Returns the message of the last error on this thread, or an empty string.
// The pointer is invalidated by the next failing call on the same thread.
const char *slabnet_last_error(void);

// Frees a string returned through a `char **out` parameter. NULL is ignored.
void slabnet_string_free(char *s);

// Builds a dataset from `n` rows of `dim` features (row-major, entries in
// [-1, 1]) and `n` labels in {-1, +1}.
enum SlabnetStatus slabnet_dataset_new(uint32_t dim,
                                       uint64_t n,
                                       const double *xs,
                                       const int8_t *ys,
                                       struct SlabnetDataset **out);

// Loads a dataset from a CSV file with header `x1,...,xd,y`.
enum SlabnetStatus slabnet_dataset_load_csv(const char *path, struct SlabnetDataset **out);

// Number of points in the dataset; 0 if the handle is NULL.
uint64_t slabnet_dataset_len(const struct SlabnetDataset *ds);

// Feature dimension of the dataset; 0 if the handle is NULL.
uint32_t slabnet_dataset_dim(const struct SlabnetDataset *ds);

// Frees a dataset handle. NULL is ignored.
void slabnet_dataset_free(struct SlabnetDataset *ds);

// Samples the Gibbs posterior over sparse networks of shape `arch` on `ds`.
enum SlabnetStatus slabnet_sample(const struct SlabnetDataset *ds,
                                  struct SlabnetArch arch,
                                  struct SlabnetChainOpts opts,
                                  struct SlabnetChain **out);

// Number of kept posterior draws; 0 if the handle is NULL.
uint64_t slabnet_chain_num_draws(const struct SlabnetChain *chain);

// Posterior-mean empirical hinge risk; NaN if the handle is NULL.
double slabnet_chain_mean_hinge(const struct SlabnetChain *chain);

// Fraction of accepted weight moves; NaN if the handle is NULL or no weight
// move was proposed.
double slabnet_chain_accept_rate(const struct SlabnetChain *chain);

// Copies the dense coefficient vector (length `T`, inactive entries zero) of
// draw `idx` into `values`, which must hold `len >= T` doubles.
enum SlabnetStatus slabnet_chain_draw(const struct SlabnetChain *chain,
                                      uint64_t idx,
                                      double *values,
                                      uint64_t len);

// Serializes the full chain result (config, draws, traces) to JSON.
enum SlabnetStatus slabnet_chain_to_json(const struct SlabnetChain *chain, char **out);

// Frees a chain handle. NULL is ignored.
void slabnet_chain_free(struct SlabnetChain *chain);

// Computes a fully numeric high-probability risk certificate for the Gibbs
// posterior at `opts.lambda`: runs thermodynamic integration over
// `ti_grid + 1` temperature nodes to estimate the partition function, then
// assembles the itemized bound holding with probability `1 - epsilon`.
// `n_mc` caps the posterior draws used for the risk term; `cert_seed` drives
// only the certificate's own subsampling.
enum SlabnetStatus slabnet_certify(const struct SlabnetDataset *ds,
                                   struct SlabnetArch arch,
                                   struct SlabnetChainOpts opts,
                                   uint32_t ti_grid,
                                   double epsilon,
                                   uint64_t n_mc,
                                   uint64_t cert_seed,
                                   struct SlabnetCertificate **out);

// The certificate's total bound on posterior-averaged misclassification
// risk; NaN if the handle is NULL.
double slabnet_certificate_total(const struct SlabnetCertificate *cert);

// The KL (complexity) estimate inside the certificate; NaN if NULL.
double slabnet_certificate_kl(const struct SlabnetCertificate *cert);

// The thermodynamic estimate of `log Z(lambda)`; NaN if NULL.
double slabnet_certificate_log_z(const struct SlabnetCertificate *cert);

// Serializes the itemized certificate (terms, notes, totals) to JSON.
enum SlabnetStatus slabnet_certificate_to_json(const struct SlabnetCertificate *cert, char **out);

// Frees a certificate handle. NULL is ignored.
void slabnet_certificate_free(struct SlabnetCertificate *cert);

// Runs the numerical verification battery (identity, concentration,
// perturbation, and KL-bound checks). Writes 1 to `all_passed` when every
// check holds, 0 otherwise; optionally returns the full JSON scorecard
// through `json_out` (pass NULL to skip it).
enum SlabnetStatus slabnet_verify(uint64_t seed, uint8_t *all_passed, char **json_out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SLABNET_H */
