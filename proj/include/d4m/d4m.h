/*
 * C interface to the d4m associative-array engine.
 *
 * Objects are opaque handles created by d4m_*_new / constructors and
 * released with the matching *_free call. Every fallible call returns a
 * d4m_status; on failure d4m_last_error() describes the problem (the message
 * is thread-local and valid until the next failing call on that thread).
 * Strings returned through `char**` out-parameters are owned by the caller
 * and released with d4m_string_free().
 *
 * Key selector strings use the trailing-delimiter convention: "a,b," lists
 * keys, "a,:,c," is the inclusive range a..c, ":" selects everything.
 */
#ifndef D4M_D4M_H_
#define D4M_D4M_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define D4M_API __declspec(dllexport)
#else
#define D4M_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum d4m_status {
  D4M_OK = 0,
  D4M_ERR_IO = 1,
  D4M_ERR_PARSE = 2,
  D4M_ERR_MEMORY_CAP = 3,
  D4M_ERR_VALIDATION = 4,
  D4M_ERR_INVALID_ARGUMENT = 5,
  D4M_ERR_KIND_MISMATCH = 6,
  D4M_ERR_CONFLICT = 7,
  D4M_ERR_INTERNAL = 99
} d4m_status;

typedef enum d4m_kind { D4M_NUM = 0, D4M_STR = 1 } d4m_kind;

typedef enum d4m_collision {
  D4M_COLLISION_DEFAULT = -1, /* sum for Num, last for Str */
  D4M_COLLISION_SUM = 0,
  D4M_COLLISION_MIN = 1,
  D4M_COLLISION_MAX = 2,
  D4M_COLLISION_LAST = 3
} d4m_collision;

typedef enum d4m_binop {
  D4M_OP_PLUS = 0,
  D4M_OP_TIMES = 1,
  D4M_OP_MIN = 2,
  D4M_OP_MAX = 3,
  D4M_OP_LAST = 4
} d4m_binop;

typedef enum d4m_semiring {
  D4M_PLUS_TIMES = 0,
  D4M_MIN_PLUS = 1,
  D4M_MAX_TIMES = 2
} d4m_semiring;

typedef enum d4m_combiner {
  D4M_COMBINER_NONE = 0,
  D4M_COMBINER_SUM = 1,
  D4M_COMBINER_MIN = 2,
  D4M_COMBINER_MAX = 3,
  D4M_COMBINER_LAST = 4
} d4m_combiner;

typedef struct d4m_assoc d4m_assoc;
typedef struct d4m_store d4m_store;

typedef struct d4m_tablemult_stats {
  uint64_t partial_products;
  uint64_t inner_rows;
  size_t peak_bytes;
} d4m_tablemult_stats;

D4M_API const char* d4m_last_error(void);
D4M_API const char* d4m_version(void);
D4M_API void d4m_string_free(char* s);

/* ---- associative arrays ------------------------------------------------ */

D4M_API d4m_status d4m_assoc_from_num(const char* const* rows, const char* const* cols,
                                      const double* vals, size_t n, int collision,
                                      d4m_assoc** out);
D4M_API d4m_status d4m_assoc_from_str(const char* const* rows, const char* const* cols,
                                      const char* const* vals, size_t n, int collision,
                                      d4m_assoc** out);
/* kind: D4M_NUM parses every value as a decimal float. */
D4M_API d4m_status d4m_assoc_read_tsv(const char* path, int kind, int collision,
                                      d4m_assoc** out);
D4M_API d4m_status d4m_assoc_to_tsv(const d4m_assoc* a, char** out);
D4M_API d4m_status d4m_assoc_clone(const d4m_assoc* a, d4m_assoc** out);
D4M_API void d4m_assoc_free(d4m_assoc* a);

D4M_API int d4m_assoc_kind(const d4m_assoc* a);
D4M_API size_t d4m_assoc_nnz(const d4m_assoc* a);
D4M_API void d4m_assoc_dims(const d4m_assoc* a, size_t* rows, size_t* cols);
/* Entry i in row-major order. Returned strings live as long as the array.
 * Exactly one of *num / *str is meaningful, per d4m_assoc_kind(). Any
 * out-pointer may be NULL. */
D4M_API d4m_status d4m_assoc_entry(const d4m_assoc* a, size_t i, const char** row,
                                   const char** col, double* num, const char** str);

D4M_API d4m_status d4m_assoc_subref(const d4m_assoc* a, const char* rows, const char* cols,
                                    d4m_assoc** out);
D4M_API d4m_status d4m_assoc_transpose(const d4m_assoc* a, d4m_assoc** out);
D4M_API d4m_status d4m_assoc_logical(const d4m_assoc* a, d4m_assoc** out);
D4M_API d4m_status d4m_assoc_ew_add(const d4m_assoc* a, const d4m_assoc* b, int op,
                                    d4m_assoc** out);
D4M_API d4m_status d4m_assoc_ew_mult(const d4m_assoc* a, const d4m_assoc* b, int op,
                                     d4m_assoc** out);
D4M_API d4m_status d4m_assoc_matmul(const d4m_assoc* a, const d4m_assoc* b, int semiring,
                                    unsigned threads, d4m_assoc** out);
D4M_API d4m_status d4m_assoc_reduce_rows(const d4m_assoc* a, d4m_assoc** out);
D4M_API d4m_status d4m_assoc_reduce_cols(const d4m_assoc* a, d4m_assoc** out);
D4M_API int d4m_assoc_equal(const d4m_assoc* a, const d4m_assoc* b);

/* ---- store ------------------------------------------------------------- */

D4M_API d4m_status d4m_store_new(d4m_store** out);
D4M_API void d4m_store_free(d4m_store* s);
/* Loads a snapshot directory; a directory without MANIFEST.tsv is empty. */
D4M_API d4m_status d4m_store_load(d4m_store* s, const char* dir);
D4M_API d4m_status d4m_store_save(const d4m_store* s, const char* dir);
D4M_API d4m_status d4m_store_create_table(d4m_store* s, const char* name, int combiner);
D4M_API int d4m_store_has_table(const d4m_store* s, const char* name);
D4M_API d4m_status d4m_store_put(d4m_store* s, const char* table, const char* row,
                                 const char* col, const char* value);
D4M_API d4m_status d4m_store_delete(d4m_store* s, const char* table, const char* row,
                                    const char* col);
D4M_API d4m_status d4m_store_flush(d4m_store* s, const char* table);
D4M_API d4m_status d4m_store_compact(d4m_store* s, const char* table);
D4M_API d4m_status d4m_store_scan_tsv(const d4m_store* s, const char* table, const char* rows,
                                      const char* cols, char** out);
D4M_API d4m_status d4m_store_scan_count(const d4m_store* s, const char* table, uint64_t* out);

/* ---- schema: <base>, <base>_T, <base>_Deg ------------------------------ */

D4M_API d4m_status d4m_bind(d4m_store* s, const char* base);
D4M_API d4m_status d4m_ingest_assoc(d4m_store* s, const char* base, const d4m_assoc* a);
/* Ingests a TripleFile. With `exploded` set, each record row/name/value is
 * stored as (row, name<delim>value, "1"). */
D4M_API d4m_status d4m_ingest_tsv(d4m_store* s, const char* base, const char* path,
                                  int exploded, char delim, uint64_t* count);
D4M_API d4m_status d4m_query(const d4m_store* s, const char* base, const char* rows,
                             const char* cols, d4m_assoc** out);
/* Stored text of the matching entries, as TripleFile. */
D4M_API d4m_status d4m_query_tsv(const d4m_store* s, const char* base, const char* rows,
                                 const char* cols, char** out);
D4M_API d4m_status d4m_degree(const d4m_store* s, const char* base, const char* keys,
                              d4m_assoc** out);
/* C += A' * B inside the store; memory_cap 0 means unlimited. */
D4M_API d4m_status d4m_tablemult(d4m_store* s, const char* a, const char* b, const char* c,
                                 int semiring, size_t memory_cap, d4m_tablemult_stats* stats);

/* ---- graph algorithms --------------------------------------------------
 * Negative degree bounds mean unbounded. The *_table variants run against
 * a bound table group; d4m_ktruss_table deletes edges from it in place. */

D4M_API d4m_status d4m_bfs_assoc(const d4m_assoc* adj, const char* seeds, size_t hops,
                                 int64_t min_degree, int64_t max_degree, d4m_assoc** out);
D4M_API d4m_status d4m_bfs_table(d4m_store* s, const char* base, const char* seeds,
                                 size_t hops, int64_t min_degree, int64_t max_degree,
                                 d4m_assoc** out);
D4M_API d4m_status d4m_jaccard_assoc(const d4m_assoc* adj, d4m_assoc** out);
D4M_API d4m_status d4m_jaccard_table(d4m_store* s, const char* base, d4m_assoc** out);
D4M_API d4m_status d4m_ktruss_assoc(const d4m_assoc* adj, size_t k, d4m_assoc** out);
D4M_API d4m_status d4m_ktruss_table(d4m_store* s, const char* base, size_t k, d4m_assoc** out);

/* ---- generation and benchmarking -------------------------------------- */

/* kind: "erdos" or "powerlaw". Output is a sorted TripleFile. */
D4M_API d4m_status d4m_gen_graph(const char* kind, uint64_t n, double avg_degree,
                                 uint64_t seed, char** out);
/* Runs client and in-store multiply per scale; writes the bench CSV text. */
D4M_API d4m_status d4m_bench_tablemult(const int* scales, size_t n_scales, uint64_t seed,
                                       size_t memory_cap, unsigned threads, char** csv_out);
D4M_API d4m_status d4m_gnuplot_script(const char* csv_path, char** out);

#ifdef __cplusplus
}
#endif

#endif /* D4M_D4M_H_ */
