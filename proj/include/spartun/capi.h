#ifndef SPARTUN_CAPI_H
#define SPARTUN_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Stable C surface over the pipeline. All strings returned through char**
 * are heap-allocated and must be released with sp_string_free. On any
 * non-SP_OK status, sp_last_error() describes the failure (thread-local). */

typedef enum sp_status {
  SP_OK = 0,
  SP_ERR_PARSE = 1,
  SP_ERR_VALIDATION = 2,
  SP_ERR_IO = 3,
  SP_ERR_CONFIG = 4,
  SP_ERR_UNKNOWN_ID = 5,
  SP_ERR_NUMERIC = 6,
  SP_ERR_TRANSPORT = 7,
  SP_ERR_ARGUMENT = 8,
  SP_ERR_INTERNAL = 9
} sp_status;

typedef struct sp_scene sp_scene;

const char* sp_last_error(void);
void sp_string_free(char* s);

sp_status sp_scene_load_file(const char* path, sp_scene** out);
sp_status sp_scene_load_json(const char* json_text, sp_scene** out);
void sp_scene_free(sp_scene* scene);
sp_status sp_scene_serialize(const sp_scene* scene, char** out_json);

/* 3RScan semantic-segmentation dump -> normalized scene JSON. */
sp_status sp_ingest_3rscan(const char* semseg_json, const char* scene_id,
                           char** out_scene_json);

/* Deterministic situation sample / situated graph for (scene, seed). */
sp_status sp_sample_situation(const sp_scene* scene, uint64_t seed,
                              char** out_json);
sp_status sp_graph_json(const sp_scene* scene, uint64_t seed, char** out_json);

/* Bird-eye SVG; with_situation != 0 also draws the sampled standing point,
 * orientation arrow and direction wedges for the given seed. */
sp_status sp_render_scene(const sp_scene* scene, uint64_t seed,
                          int with_situation, char** out_svg);

/* Batch generation from a manifest (JSON text). Report JSON carries train /
 * test counts, warning count and output paths. */
sp_status sp_generate(const char* manifest_json, char** out_report_json);

/* Fidelity replay of a dataset against its scene directory. SP_OK even when
 * violations are found; the report JSON carries the counts. */
sp_status sp_validate(const char* dataset_path, const char* scene_dir,
                      char** out_report_json);

sp_status sp_split_file(const char* dataset_path, const char* train_out_path,
                        const char* test_out_path, uint64_t seed);

sp_status sp_stats_file(const char* dataset_path, char** out_json);

sp_status sp_eval_file(const char* predictions_path, char** out_report_json);

/* Gradient verification on a seeded random instance; writes the max
 * relative error between analytic and finite-difference gradients. */
sp_status sp_align_check(uint64_t seed, double* out_max_rel_err);

#ifdef __cplusplus
}
#endif

#endif /* SPARTUN_CAPI_H */
