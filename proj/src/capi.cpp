#include "spartun/capi.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"
#include "spartun/align.hpp"
#include "spartun/errors.hpp"
#include "spartun/evalkit.hpp"
#include "spartun/pipeline.hpp"
#include "spartun/render.hpp"

using nlohmann::ordered_json;

struct sp_scene {
  spartun::Scene scene;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sp_status fail(sp_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
sp_status guarded(Fn&& fn) {
  using namespace spartun;
  try {
    return fn();
  } catch (const ParseError& e) {
    return fail(SP_ERR_PARSE, e.what());
  } catch (const SchemaError& e) {
    return fail(SP_ERR_PARSE, e.what());
  } catch (const MalformedResponseError& e) {
    return fail(SP_ERR_PARSE, e.what());
  } catch (const UnknownIdError& e) {
    return fail(SP_ERR_UNKNOWN_ID, e.what());
  } catch (const ConfigError& e) {
    return fail(SP_ERR_CONFIG, e.what());
  } catch (const IoError& e) {
    return fail(SP_ERR_IO, e.what());
  } catch (const AuthError& e) {
    return fail(SP_ERR_TRANSPORT, e.what());
  } catch (const RateLimitExhaustedError& e) {
    return fail(SP_ERR_TRANSPORT, e.what());
  } catch (const TransportError& e) {
    return fail(SP_ERR_TRANSPORT, e.what());
  } catch (const NonFiniteGradientError& e) {
    return fail(SP_ERR_NUMERIC, e.what());
  } catch (const ShapeError& e) {
    return fail(SP_ERR_NUMERIC, e.what());
  } catch (const RangeError& e) {
    return fail(SP_ERR_NUMERIC, e.what());
  } catch (const IndexError& e) {
    return fail(SP_ERR_NUMERIC, e.what());
  } catch (const Error& e) {
    return fail(SP_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(SP_ERR_INTERNAL, e.what());
  }
}

sp_status require_arg(bool ok, const char* what) {
  if (ok) return SP_OK;
  return fail(SP_ERR_ARGUMENT, std::string("null argument: ") + what);
}

spartun::Situation sample_for(const spartun::Scene& scene, uint64_t seed) {
  spartun::Rng rng = spartun::Rng::derive(seed, scene.id, 0);
  return spartun::sample_situation(scene, rng);
}

}  // namespace

extern "C" {

const char* sp_last_error(void) { return g_last_error.c_str(); }

void sp_string_free(char* s) { std::free(s); }

sp_status sp_scene_load_file(const char* path, sp_scene** out) {
  if (sp_status s = require_arg(path && out, "sp_scene_load_file")) return s;
  return guarded([&] {
    auto handle = new sp_scene{spartun::load_scene_file(path)};
    *out = handle;
    return SP_OK;
  });
}

sp_status sp_scene_load_json(const char* json_text, sp_scene** out) {
  if (sp_status s = require_arg(json_text && out, "sp_scene_load_json")) return s;
  return guarded([&] {
    auto handle = new sp_scene{spartun::load_scene(json_text)};
    *out = handle;
    return SP_OK;
  });
}

void sp_scene_free(sp_scene* scene) { delete scene; }

sp_status sp_scene_serialize(const sp_scene* scene, char** out_json) {
  if (sp_status s = require_arg(scene && out_json, "sp_scene_serialize")) return s;
  return guarded([&] {
    *out_json = dup_string(spartun::serialize_scene(scene->scene));
    return SP_OK;
  });
}

sp_status sp_ingest_3rscan(const char* semseg_json, const char* scene_id,
                           char** out_scene_json) {
  if (sp_status s = require_arg(semseg_json && scene_id && out_scene_json,
                                "sp_ingest_3rscan")) {
    return s;
  }
  return guarded([&] {
    spartun::Scene scene = spartun::ingest_3rscan(semseg_json, scene_id);
    *out_scene_json = dup_string(spartun::serialize_scene(scene));
    return SP_OK;
  });
}

sp_status sp_sample_situation(const sp_scene* scene, uint64_t seed,
                              char** out_json) {
  if (sp_status s = require_arg(scene && out_json, "sp_sample_situation")) return s;
  return guarded([&] {
    *out_json = dup_string(
        spartun::situation_to_json(sample_for(scene->scene, seed)));
    return SP_OK;
  });
}

sp_status sp_graph_json(const sp_scene* scene, uint64_t seed, char** out_json) {
  if (sp_status s = require_arg(scene && out_json, "sp_graph_json")) return s;
  return guarded([&] {
    const spartun::Situation situation = sample_for(scene->scene, seed);
    const auto graph = spartun::build_situated_graph(scene->scene, situation);
    *out_json = dup_string(spartun::graph_to_json(graph));
    return SP_OK;
  });
}

sp_status sp_render_scene(const sp_scene* scene, uint64_t seed,
                          int with_situation, char** out_svg) {
  if (sp_status s = require_arg(scene && out_svg, "sp_render_scene")) return s;
  return guarded([&] {
    std::optional<spartun::Situation> situation;
    if (with_situation) situation = sample_for(scene->scene, seed);
    *out_svg = dup_string(spartun::render_svg(scene->scene, situation));
    return SP_OK;
  });
}

sp_status sp_generate(const char* manifest_json, char** out_report_json) {
  if (sp_status s = require_arg(manifest_json && out_report_json, "sp_generate")) {
    return s;
  }
  return guarded([&] {
    const auto manifest = spartun::RunManifest::from_json(manifest_json);
    const auto result = spartun::run_generate(manifest);
    ordered_json report;
    report["train_examples"] = result.train_examples;
    report["test_examples"] = result.test_examples;
    report["warnings"] = result.warnings;
    report["train_path"] = result.train_path;
    report["test_path"] = result.test_path;
    report["stats_path"] = result.stats_path;
    *out_report_json = dup_string(report.dump(2) + "\n");
    return SP_OK;
  });
}

sp_status sp_validate(const char* dataset_path, const char* scene_dir,
                      char** out_report_json) {
  if (sp_status s = require_arg(dataset_path && scene_dir && out_report_json,
                                "sp_validate")) {
    return s;
  }
  return guarded([&] {
    const auto summary = spartun::validate_dataset(dataset_path, scene_dir);
    ordered_json report;
    report["examples"] = summary.examples;
    report["failed_examples"] = summary.failed_examples;
    report["violations"] = summary.violations;
    report["details"] = summary.details;
    *out_report_json = dup_string(report.dump(2) + "\n");
    return SP_OK;
  });
}

sp_status sp_split_file(const char* dataset_path, const char* train_out_path,
                        const char* test_out_path, uint64_t seed) {
  if (sp_status s = require_arg(dataset_path && train_out_path && test_out_path,
                                "sp_split_file")) {
    return s;
  }
  return guarded([&] {
    auto examples = spartun::load_jsonl(dataset_path);
    spartun::SplitSpec spec = spartun::SplitSpec::defaults();
    spec.seed = seed;
    auto [train, test] = spartun::split(examples, spec);
    std::ofstream train_out(train_out_path, std::ios::binary);
    if (!train_out) throw spartun::IoError(std::string("cannot write ") + train_out_path);
    spartun::emit_jsonl(train, train_out);
    std::ofstream test_out(test_out_path, std::ios::binary);
    if (!test_out) throw spartun::IoError(std::string("cannot write ") + test_out_path);
    spartun::emit_jsonl(test, test_out);
    return SP_OK;
  });
}

sp_status sp_stats_file(const char* dataset_path, char** out_json) {
  if (sp_status s = require_arg(dataset_path && out_json, "sp_stats_file")) return s;
  return guarded([&] {
    *out_json = dup_string(spartun::stats(spartun::load_jsonl(dataset_path)));
    return SP_OK;
  });
}

sp_status sp_eval_file(const char* predictions_path, char** out_report_json) {
  if (sp_status s = require_arg(predictions_path && out_report_json,
                                "sp_eval_file")) {
    return s;
  }
  return guarded([&] {
    const auto records = spartun::eval::load_predictions(predictions_path);
    const auto report = spartun::eval::evaluate(records);
    *out_report_json = dup_string(spartun::eval::report_to_json(report));
    return SP_OK;
  });
}

sp_status sp_align_check(uint64_t seed, double* out_max_rel_err) {
  if (sp_status s = require_arg(out_max_rel_err != nullptr, "sp_align_check")) {
    return s;
  }
  return guarded([&] {
    using namespace spartun;
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    auto draw = [&] { return rng.uniform() * 2.0 - 1.0; };

    const size_t k = 3, d = 4, h = 8;
    align::Matrix o(k, d);
    align::Matrix w(k, d);
    for (double& v : o.data) v = draw();
    for (double& v : w.data) v = draw();

    std::vector<std::string> ids;
    std::vector<geom::Vec3> centers;
    for (size_t i = 0; i < k; ++i) {
      ids.push_back("obj_" + std::to_string(i));
      centers.push_back({draw() * 3.0, draw() * 3.0, draw() + 1.0});
    }
    const auto f = align::build_feature_matrix(ids, centers);

    align::AttentionParams params = align::AttentionParams::zeros(d, h);
    for (double& v : params.w_q.data) v = draw();
    for (double& v : params.w_k.data) v = draw();
    for (double& v : params.w_v.data) v = draw();
    for (double& v : params.mlp_w1.data) v = draw() * 0.5;
    for (double& v : params.mlp_b1) v = draw() * 0.1;
    for (double& v : params.mlp_w2) v = draw() * 0.5;
    params.mlp_b2 = draw() * 0.1;

    *out_max_rel_err = align::grad_check(o, f, params, w, 1e-5);
    return SP_OK;
  });
}

}  // extern "C"
