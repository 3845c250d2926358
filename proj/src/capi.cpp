#include "topoforge.h"

#include <cstring>
#include <json.hpp>
#include <string>

#include "artifact.hpp"
#include "bruteforce.hpp"

using namespace topoforge;

struct tf_session {
  RunConfig cfg;
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tf_status fail(tf_session* s, tf_status st, const std::string& msg) {
  if (s) s->last_error = msg;
  return st;
}

template <class Fn>
tf_status guarded(tf_session* s, Fn&& fn) {
  if (!s) return TF_E_BADARG;
  try {
    return fn();
  } catch (const BudgetExhausted& e) {
    return fail(s, TF_E_BUDGET, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(s, TF_E_BADARG, e.what());
  } catch (const std::exception& e) {
    return fail(s, TF_E_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

tf_session* tf_session_create(const char* config_json) {
  try {
    auto* s = new tf_session;
    if (config_json && config_json[0] != '\0') s->cfg = RunConfig::from_json(config_json);
    return s;
  } catch (...) {
    return nullptr;
  }
}

void tf_session_destroy(tf_session* s) { delete s; }

const char* tf_session_last_error(const tf_session* s) { return s ? s->last_error.c_str() : ""; }

tf_status tf_build(tf_session* s, char** artifact_json_out) {
  return guarded(s, [&]() -> tf_status {
    if (!artifact_json_out) return fail(s, TF_E_BADARG, "artifact output pointer is null");
    std::string json;
    bool exhausted = false;
    std::string why;
    if (s->cfg.rational_control()) {
      RationalField field;
      BuildArtifact<RationalField> art = build_topology(field, s->cfg);
      json = artifact_to_json(field, art);
      exhausted = art.budget_exhausted;
      why = art.failure;
    } else {
      PrimeClosure field(s->cfg.p);
      BuildArtifact<PrimeClosure> art = build_topology(field, s->cfg);
      json = artifact_to_json(field, art);
      exhausted = art.budget_exhausted;
      why = art.failure;
    }
    *artifact_json_out = dup_string(json);
    if (exhausted) return fail(s, TF_E_BUDGET, why);
    return TF_OK;
  });
}

tf_status tf_frontier_build(tf_session* s, const char* samples_json, char** artifact_json_out) {
  return guarded(s, [&]() -> tf_status {
    if (!artifact_json_out || !samples_json) return fail(s, TF_E_BADARG, "null argument");
    nlohmann::ordered_json sj = nlohmann::ordered_json::parse(samples_json);
    const uint32_t dim = sj.value("dim", s->cfg.sample_dim);
    auto parse_tuples = [&](auto& field) {
      std::vector<std::vector<typename std::decay_t<decltype(field)>::Value>> tuples;
      for (const auto& t : sj.at("samples")) {
        std::vector<typename std::decay_t<decltype(field)>::Value> tup;
        for (const auto& e : t) tup.push_back(field.decode(e.template get<std::string>()));
        if (tup.size() != dim) throw std::invalid_argument("sample arity does not match dim");
        tuples.push_back(std::move(tup));
      }
      std::vector<typename std::decay_t<decltype(field)>::Value> limit(dim, field.zero());
      if (sj.contains("limit_point")) {
        limit.clear();
        for (const auto& e : sj.at("limit_point")) limit.push_back(field.decode(e.template get<std::string>()));
        if (limit.size() != dim) throw std::invalid_argument("limit point arity does not match dim");
      }
      return std::make_pair(std::move(tuples), std::move(limit));
    };
    RunConfig cfg = s->cfg;
    cfg.sample_dim = dim;
    std::string json;
    bool exhausted = false;
    std::string why;
    if (cfg.rational_control()) {
      RationalField field;
      auto [tuples, limit] = parse_tuples(field);
      BuildArtifact<RationalField> art = build_frontier_topology(field, cfg, tuples, limit);
      json = artifact_to_json(field, art);
      exhausted = art.budget_exhausted;
      why = art.failure;
    } else {
      PrimeClosure field(cfg.p);
      auto [tuples, limit] = parse_tuples(field);
      BuildArtifact<PrimeClosure> art = build_frontier_topology(field, cfg, tuples, limit);
      json = artifact_to_json(field, art);
      exhausted = art.budget_exhausted;
      why = art.failure;
    }
    *artifact_json_out = dup_string(json);
    if (exhausted) return fail(s, TF_E_BUDGET, why);
    return TF_OK;
  });
}

tf_status tf_verify(tf_session* s, const char* artifact_json, char** report_json_out) {
  return guarded(s, [&]() -> tf_status {
    if (!artifact_json || !report_json_out) return fail(s, TF_E_BADARG, "null argument");
    VerifyResult vr = verify_artifact_json(artifact_json);
    nlohmann::ordered_json j;
    j["status"] = vr.status;
    j["kind"] = vr.kind;
    j["p"] = vr.p;
    j["rows"] = vr.rows;
    j["error"] = vr.error;
    j["ok"] = vr.report.ok();
    j["summary"] = vr.report.summary();
    j["records"] = nlohmann::ordered_json::parse(report_to_json(vr.report))["records"];
    *report_json_out = dup_string(j.dump());
    if (vr.status == 0) return TF_OK;
    if (vr.status == 1) return fail(s, TF_E_VERIFY, vr.report.summary());
    return fail(s, TF_E_BADARG, vr.error);
  });
}

tf_status tf_brute_force(tf_session* s, unsigned p, unsigned max_len, char** report_json_out) {
  return guarded(s, [&]() -> tf_status {
    if (!report_json_out) return fail(s, TF_E_BADARG, "null argument");
    SearchSpaceSpec spec;
    spec.p = p;
    spec.max_len = max_len;
    BruteForceResult res = brute_force_suitable_search(spec);
    *report_json_out = dup_string(res.to_json());
    return TF_OK;
  });
}

tf_status tf_schedule_at(tf_session* s, unsigned long long i, char** pair_json_out) {
  return guarded(s, [&]() -> tf_status {
    if (!pair_json_out) return fail(s, TF_E_BADARG, "null argument");
    const SchedulePoint sp = schedule_at(i);
    nlohmann::ordered_json j;
    j["i"] = i;
    j["n"] = sp.n;
    if (s->cfg.rational_control()) {
      RationalField field;
      j["a"] = field.encode(field.enumerate(sp.element_index));
    } else {
      PrimeClosure field(s->cfg.p);
      j["a"] = field.encode(field.enumerate(sp.element_index));
    }
    *pair_json_out = dup_string(j.dump());
    return TF_OK;
  });
}

tf_status tf_reformat(tf_session* s, const char* json, int pretty, char** out) {
  return guarded(s, [&]() -> tf_status {
    if (!json || !out) return fail(s, TF_E_BADARG, "null argument");
    try {
      *out = dup_string(reformat_json(json, pretty != 0));
    } catch (const std::exception& e) {
      return fail(s, TF_E_BADARG, e.what());
    }
    return TF_OK;
  });
}

void tf_string_free(char* s) { std::free(s); }

unsigned tf_version(void) { return 1; }

}  // extern "C"
