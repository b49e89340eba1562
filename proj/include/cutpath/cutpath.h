/* cutpath — random-walk path statistics and electrical-network machinery on
 * weighted graphs, exposed as a C shared-library API with opaque handles and
 * status codes. Thread safety: handles are immutable once created; the error
 * message buffer is thread-local.
 */
#ifndef CUTPATH_H
#define CUTPATH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CUTPATH_API __declspec(dllexport)
#else
#define CUTPATH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cutpath_status {
    CUTPATH_OK = 0,
    CUTPATH_ERR_INVALID = 1, /* bad arguments or config */
    CUTPATH_ERR_IO = 2,      /* file-system failure */
    CUTPATH_ERR_NUMERIC = 3, /* solver or sampling failure */
    CUTPATH_ERR_INTERNAL = 4
} cutpath_status;

/* Message for the most recent failure on this thread. */
CUTPATH_API const char* cutpath_last_error(void);
CUTPATH_API const char* cutpath_version(void);

typedef struct cutpath_network cutpath_network;
typedef struct cutpath_voltage cutpath_voltage;

/* ---- networks ----------------------------------------------------------- */

/* Builds a network from m undirected edges (u[i], v[i]) with conductance
 * c[i] > 0 on n vertices. Parallel edges and self-loops are allowed. */
CUTPATH_API cutpath_status cutpath_network_build(uint32_t n, const uint32_t* u, const uint32_t* v,
                                                 const double* c, size_t m, cutpath_network** out);
/* ugraph v1 text format; save/load round-trips bit-exactly. */
CUTPATH_API cutpath_status cutpath_network_load(const char* path, cutpath_network** out);
CUTPATH_API cutpath_status cutpath_network_save(const cutpath_network* net, const char* path);
CUTPATH_API uint32_t cutpath_network_vertex_count(const cutpath_network* net);
CUTPATH_API uint64_t cutpath_network_edge_count(const cutpath_network* net);
/* Layer label of a vertex, or INT32_MIN when the network is unlabeled. */
CUTPATH_API int32_t cutpath_network_layer(const cutpath_network* net, uint32_t v);
CUTPATH_API void cutpath_network_free(cutpath_network* net);

/* ---- generators ---------------------------------------------------------- */

typedef struct cutpath_gen_params {
    double alpha;   /* layered, horn */
    uint32_t d;     /* expander degree (layered, expander) */
    int64_t j_max;  /* layered: last layer */
    int64_t radius; /* disk */
    uint32_t dim;   /* horn: lattice dimension */
    int64_t x1_max; /* horn: axis truncation */
    uint32_t n;     /* expander: vertex count */
    uint64_t seed;
} cutpath_gen_params;

/* family: "layered" | "horn" | "disk" | "expander". */
CUTPATH_API cutpath_status cutpath_generate(const char* family, const cutpath_gen_params* p,
                                            cutpath_network** out);
/* Writes the graph in ugraph v1 plus a key=value sidecar describing the
 * family, parameters, seed, and the special vertices (root/sink). */
CUTPATH_API cutpath_status cutpath_generate_to_files(const char* family,
                                                     const cutpath_gen_params* p,
                                                     const char* graph_path, const char* meta_path);

/* ---- harmonic solves ------------------------------------------------------ */

CUTPATH_API cutpath_status cutpath_solve_voltage(const cutpath_network* net, uint32_t source,
                                                 uint32_t sink, cutpath_voltage** out);
CUTPATH_API double cutpath_voltage_value(const cutpath_voltage* sol, uint32_t x);
CUTPATH_API double cutpath_voltage_ceff(const cutpath_voltage* sol);
CUTPATH_API double cutpath_voltage_s(const cutpath_voltage* sol);
CUTPATH_API void cutpath_voltage_free(cutpath_voltage* sol);

/* Effective conductance between two disjoint vertex sets (contract + solve). */
CUTPATH_API cutpath_status cutpath_effective_conductance(const cutpath_network* net,
                                                         const uint32_t* a, size_t na,
                                                         const uint32_t* b, size_t nb,
                                                         double* out);

/* ---- walks ---------------------------------------------------------------- */

typedef struct cutpath_walk_params {
    uint32_t start;
    /* "vertex:ID[,ID...]" stops on hitting any listed vertex;
     * "layer:K" stops on reaching layer >= K; "budget" runs the full budget. */
    const char* stop;
    uint64_t budget;
    uint64_t seed;
    uint32_t replicas;
    double lookahead_frac; /* cut-time censoring window as a fraction of T */
    int write_trace_bin;   /* also emit <prefix>_r<k>.trace (u32 LE ids) */
} cutpath_walk_params;

/* Runs seeded replicas and writes <prefix>_summary.csv with one row per
 * replica: replica, steps, stop_reason, n_cut_times, n_cutpoints. */
CUTPATH_API cutpath_status cutpath_walk_to_files(const cutpath_network* net,
                                                 const cutpath_walk_params* p,
                                                 const char* out_prefix);

/* ---- bounds --------------------------------------------------------------- */

typedef struct cutpath_bounds_params {
    const int64_t* a_values;
    size_t n_a;
    int64_t t_max;
    int64_t m_mult; /* visit counts swept to m_mult * a */
    double laziness;
} cutpath_bounds_params;

/* Sweeps the exact excursion oracle against the closed-form tail bounds and
 * writes one CSV (columns a, t_or_m, exact, bound, satisfied; the hitting-time
 * block precedes the visit-count block, separated by comment markers).
 * Returns CUTPATH_ERR_NUMERIC if any row is violated. */
CUTPATH_API cutpath_status cutpath_bounds_to_file(const cutpath_bounds_params* p,
                                                  const char* out_csv);

/* ---- experiments ----------------------------------------------------------- */

/* Runs experiment id ("E1".."E6") with its shipped preset, optionally
 * overridden by a config file and/or an explicit seed, writing CSVs and a
 * summary into out_dir (default "."). If satisfied is non-null it receives 1
 * when every bound check of the experiment passed. Outputs are byte-identical
 * across reruns with the same config. */
CUTPATH_API cutpath_status cutpath_experiment_run(const char* id, const char* config_path,
                                                  const char* out_dir, const uint64_t* seed,
                                                  int* satisfied);

#ifdef __cplusplus
}
#endif

#endif /* CUTPATH_H */
