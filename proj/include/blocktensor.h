#ifndef BLOCKTENSOR_H
#define BLOCKTENSOR_H

/* C interface to the block-tensor library: dense tensors in vec order,
 * unfoldings, block unfoldings, contractions, and the randomized
 * verification suite. Handles are opaque; functions return status codes and
 * leave a message retrievable with btl_last_error() on failure. Indices and
 * modes are 1-based throughout, matching the library. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct btl_tensor btl_tensor;
typedef struct btl_matrix btl_matrix;

typedef enum btl_status {
  BTL_OK = 0,
  BTL_ERR_ARGUMENT = 1,
  BTL_ERR_SHAPE = 2,
  BTL_ERR_INDEX = 3,
  BTL_ERR_PARSE = 4,
  BTL_ERR_IO = 5
} btl_status;

const char* btl_version(void);

/* Message of the most recent failure on the calling thread. */
const char* btl_last_error(void);

/* ---------- tensors ---------- */

/* data holds dims[0]*...*dims[order-1] scalars in vec order (first mode
 * fastest); pass NULL for a zero tensor. */
btl_status btl_tensor_create(const int64_t* dims, int64_t order, const double* data,
                             btl_tensor** out);

/* Tensor text format: a "dims:" line, optional "blocking k:" lines, then the
 * scalars in vec order. */
btl_status btl_tensor_read(const char* path, btl_tensor** out);
btl_status btl_tensor_write(const btl_tensor* t, const char* path);
void btl_tensor_destroy(btl_tensor* t);

int64_t btl_tensor_order(const btl_tensor* t);
int64_t btl_tensor_size(const btl_tensor* t);
btl_status btl_tensor_dims(const btl_tensor* t, int64_t* dims_out);
const double* btl_tensor_data(const btl_tensor* t);

/* Attaches the partition of one mode; parts must sum to the mode extent.
 * Modes without an explicit partition default to a single block. */
btl_status btl_tensor_set_blocking(btl_tensor* t, int64_t mode, const int64_t* parts,
                                   int64_t count);
int btl_tensor_has_blocking(const btl_tensor* t);
btl_status btl_tensor_block_counts(const btl_tensor* t, int64_t* counts_out);

/* ---------- permutations ---------- */

/* Writes the q*r entries (1-based) of the (q,r) perfect shuffle vector. */
btl_status btl_perfect_shuffle(int64_t q, int64_t r, int64_t* out);

/* ---------- unfoldings ---------- */

/* The r x c unfolding; [row_modes col_modes] must be a permutation of the
 * tensor's modes. Either side may be empty. */
btl_status btl_unfold(const btl_tensor* t, const int64_t* row_modes, int64_t n_row,
                      const int64_t* col_modes, int64_t n_col, btl_matrix** out);

/* The block unfolding under the tensor's attached blocking (required); the
 * result carries its block grid. */
btl_status btl_block_unfold(const btl_tensor* t, const int64_t* row_modes, int64_t n_row,
                            const int64_t* col_modes, int64_t n_col, btl_matrix** out);

int64_t btl_matrix_rows(const btl_matrix* m);
int64_t btl_matrix_cols(const btl_matrix* m);
const double* btl_matrix_data(const btl_matrix* m); /* column-major */

/* Block-grid row heights / column widths of a block unfolding. Call with
 * sizes_out NULL to query the count. Fails on plain unfoldings. */
btl_status btl_matrix_block_rows(const btl_matrix* m, int64_t* sizes_out, int64_t* count);
btl_status btl_matrix_block_cols(const btl_matrix* m, int64_t* sizes_out, int64_t* count);
void btl_matrix_destroy(btl_matrix* m);

/* ---------- contraction ---------- */

typedef enum btl_contract_method {
  BTL_CONTRACT_NAIVE = 0,
  BTL_CONTRACT_UNFOLDED = 1,
  BTL_CONTRACT_BLOCKED = 2
} btl_contract_method;

/* H(i,j) = sum_k F^<p>(i,k) G^<q>(k,j) with f free modes on F. The blocked
 * method uses the operands' attached blockings (single-block when absent)
 * and attaches the inherited blocking to the result. */
btl_status btl_contract(const btl_tensor* f, const btl_tensor* g, const int64_t* p, int64_t p_len,
                        const int64_t* q, int64_t q_len, int64_t f_modes,
                        btl_contract_method method, btl_tensor** out);

/* ---------- block maps and verification ---------- */

/* ASCII block map of the mode-k unfolding (plain or block variant); the
 * tensor must carry a blocking. Free the text with btl_string_free. */
btl_status btl_figure(const btl_tensor* t, int64_t mode, int block_variant, char** text_out);

/* Fault-injection flag for negative-control testing: corrupts every built
 * P_M so the blocked-vec check must fail. */
#define BTL_VERIFY_CORRUPT_PM 1u

/* Runs the randomized property suite; the report is malloc'd text, one line
 * per check. *failures_out receives the number of failed checks. */
btl_status btl_verify(uint64_t seed, uint32_t flags, char** report_out, int32_t* failures_out);

void btl_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* BLOCKTENSOR_H */
