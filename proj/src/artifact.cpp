#include "artifact.hpp"

#include <json.hpp>

namespace topoforge {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json config_to_node(const RunConfig& c) {
  ordered_json j;
  j["p"] = c.p;
  j["rows"] = c.rows;
  j["precision"] = c.precision;
  j["tau_budget"] = c.tau_budget;
  j["branch_budget"] = c.branch_budget;
  j["direct_attempts"] = c.direct_attempts;
  j["max_stage_series"] = c.max_stage_series;
  j["max_stage_field"] = c.max_stage_field;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["strategy"] = c.strategy;
  j["schedule"] = c.schedule;
  j["sample_dim"] = c.sample_dim;
  return j;
}

RunConfig config_from_node(const ordered_json& j) {
  RunConfig c;
  c.p = j.value("p", 2u);
  c.rows = j.value("rows", 1u);
  c.precision = j.value("precision", 16u);
  c.tau_budget = j.value("tau_budget", uint64_t(64));
  c.branch_budget = j.value("branch_budget", uint64_t(8));
  c.direct_attempts = j.value("direct_attempts", uint64_t(8));
  c.max_stage_series = j.value("max_stage_series", uint64_t(100000));
  c.max_stage_field = j.value("max_stage_field", uint64_t(2000000));
  c.seed = j.value("seed", uint64_t(0));
  c.jobs = j.value("jobs", 1u);
  c.strategy = j.value("strategy", std::string("series-guided"));
  c.schedule = j.value("schedule", std::string(kScheduleId));
  c.sample_dim = j.value("sample_dim", 1u);
  return c;
}

ordered_json report_to_node(const VerificationReport& rep) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rep.records) {
    ordered_json rec;
    rec["i"] = r.index;
    rec["clause"] = r.clause;
    rec["pass"] = r.pass;
    rec["witness"] = r.witness;
    arr.push_back(std::move(rec));
  }
  return arr;
}

template <class F>
ordered_json stages_to_node(F& field, const StageSeq<F>& seq) {
  ordered_json rows = ordered_json::array();
  for (const auto& st : seq.stages) {
    ordered_json stage = ordered_json::array();
    for (const auto& v : st.sorted_items(field)) stage.push_back(field.encode(v));
    rows.push_back(std::move(stage));
  }
  return rows;
}

template <class F>
ordered_json artifact_to_node(F& field, const BuildArtifact<F>& art, const ordered_json& field_node) {
  ordered_json j;
  j["format"] = kArtifactFormat;
  j["kind"] = art.kind;
  j["field"] = field_node;
  j["schedule"] = art.cfg.schedule;
  j["config"] = config_to_node(art.cfg);
  ordered_json rows = ordered_json::array();
  for (const auto& row : art.rows) rows.push_back(stages_to_node(field, row));
  j["rows"] = std::move(rows);
  j["union_prefix"] = stages_to_node(field, art.union_prefix);
  ordered_json diag = ordered_json::array();
  for (const auto& add : art.diagonal_added) diag.push_back(add);
  j["diagonal_added"] = std::move(diag);
  j["row_seed_used"] = art.row_seed_used;
  if (art.kind == "frontier") {
    ordered_json fr;
    fr["dim"] = art.cfg.sample_dim;
    fr["limit_point"] = art.limit_point;
    fr["samples"] = art.samples;
    fr["row_sample"] = art.row_sample;
    j["frontier"] = std::move(fr);
  }
  j["certificates"] = report_to_node(art.certificates);
  ordered_json status;
  status["budget_exhausted"] = art.budget_exhausted;
  status["failure"] = art.failure;
  j["status"] = std::move(status);
  return j;
}

}  // namespace

std::string RunConfig::to_json() const { return config_to_node(*this).dump(); }

RunConfig RunConfig::from_json(const std::string& json) {
  return config_from_node(ordered_json::parse(json));
}

std::string artifact_to_json(PrimeClosure& field, const BuildArtifact<PrimeClosure>& art, bool pretty) {
  ordered_json fn;
  fn["p"] = field.p();
  fn["compound_degree"] = field.compound_degree();
  ordered_json defs;
  for (const auto& [d, f] : field.defining_table()) {
    ordered_json coeffs = ordered_json::array();
    for (uint8_t c : f) coeffs.push_back(int(c));
    defs[std::to_string(d)] = std::move(coeffs);
  }
  fn["defining"] = std::move(defs);
  ordered_json gens;
  for (const auto& [d, img] : field.generator_images()) {
    ordered_json coords = ordered_json::array();
    for (uint8_t c : img) coords.push_back(int(c));
    gens[std::to_string(d)] = std::move(coords);
  }
  fn["generator_images"] = std::move(gens);
  ordered_json j = artifact_to_node(field, art, fn);
  return pretty ? j.dump(2) : j.dump();
}

std::string artifact_to_json(RationalField& field, const BuildArtifact<RationalField>& art, bool pretty) {
  ordered_json fn;
  fn["p"] = 0;
  ordered_json j = artifact_to_node(field, art, fn);
  return pretty ? j.dump(2) : j.dump();
}

std::string report_to_json(const VerificationReport& rep, bool pretty) {
  ordered_json j;
  j["ok"] = rep.ok();
  j["summary"] = rep.summary();
  j["records"] = report_to_node(rep);
  return pretty ? j.dump(2) : j.dump();
}

std::string reformat_json(const std::string& json, bool pretty) {
  ordered_json j = ordered_json::parse(json);
  return pretty ? j.dump(2) : j.dump();
}

// ---------------------------------------------------------------------------
// verification from serialized artifacts only

namespace {

template <class F>
StageSeq<F> stages_from_node(F& field, const ordered_json& node) {
  StageSeq<F> seq;
  for (const auto& stage : node) {
    StageSet<F> st;
    for (const auto& enc : stage) st.insert(field, field.decode(enc.get<std::string>()));
    seq.stages.push_back(std::move(st));
  }
  return seq;
}

template <class F>
void verify_with_field(F& field, const ordered_json& j, VerifyResult& out) {
  std::vector<StageSeq<F>> rows;
  for (const auto& row : j.at("rows")) rows.push_back(stages_from_node(field, row));
  if (rows.empty()) {
    out.status = 2;
    out.error = "artifact has no rows";
    return;
  }
  out.rows = rows.size() - 1;
  const size_t built = rows.size() - 1;
  const size_t len = built + 2;
  VerificationReport& rep = out.report;

  // row 0 must be degenerate
  {
    bool all_zero = true;
    for (size_t i = 0; i < rows[0].stages.size(); ++i) {
      if (!rows[0].stages[i].is_zero_only(field)) all_zero = false;
    }
    rep.add(0, 210, all_zero, all_zero ? "" : "row 0 is not the all-{0} row");
  }
  // every row is suitable
  for (size_t jrow = 0; jrow < rows.size(); ++jrow) {
    VerificationReport rr = check_suitable(field, rows[jrow], len - 1);
    for (auto& r : rr.records) r.witness = "row " + std::to_string(jrow) + (r.witness.empty() ? "" : "; " + r.witness);
    rep.merge(rr);
  }
  // columns increase and the diagonal grows strictly
  for (size_t jrow = 1; jrow < rows.size(); ++jrow) {
    for (size_t i = 0; i < len; ++i) {
      StageSet<F> prev = rows[jrow - 1].get(field, i);
      StageSet<F> cur = rows[jrow].get(field, i);
      if (!prev.subset_of(field, cur))
        rep.add(i, 203, false, "column decreased at row " + std::to_string(jrow));
    }
    StageSet<F> prev = rows[jrow - 1].get(field, jrow);
    StageSet<F> cur = rows[jrow].get(field, jrow);
    const bool strict = prev.subset_of(field, cur) && cur.size() > prev.size();
    rep.add(jrow, 204, strict, strict ? "" : "diagonal stage did not grow strictly at row " + std::to_string(jrow));
  }
  // the union prefix: recompute, compare with the stored one, and re-check
  StageSeq<F> u = union_rows(field, rows, len);
  if (j.contains("union_prefix")) {
    StageSeq<F> stored = stages_from_node<F>(field, j.at("union_prefix"));
    bool match = stored.stages.size() >= u.stages.size();
    for (size_t i = 0; match && i < u.stages.size(); ++i) {
      if (!stored.stages[i].set_equal(field, u.stages[i])) match = false;
    }
    rep.add(0, 211, match, match ? "" : "stored union prefix disagrees with the row union");
  }
  {
    VerificationReport ur = check_suitable(field, u, len - 1);
    for (auto& r : ur.records) r.witness = "union" + std::string(r.witness.empty() ? "" : "; " + r.witness);
    rep.merge(ur);
  }
  for (size_t jrow = 1; jrow <= built; ++jrow) {
    StageSet<F> st = u.get(field, jrow);
    rep.add(jrow, 205, !st.is_zero_only(field), "union stage must exceed {0}");
  }
  // frontier artifacts: the recorded sample sits inside the diagonal stage
  if (j.contains("frontier")) {
    const auto& fr = j.at("frontier");
    std::vector<std::vector<typename F::Value>> samples;
    for (const auto& t : fr.at("samples")) {
      std::vector<typename F::Value> tup;
      for (const auto& e : t) tup.push_back(field.decode(e.get<std::string>()));
      samples.push_back(std::move(tup));
    }
    for (const auto& t : samples) {
      bool all_zero = true;
      for (const auto& v : t) {
        if (!field.is_zero(v)) all_zero = false;
      }
      if (all_zero) rep.add(0, 212, false, "frontier sample equal to the limit point");
    }
    const auto& rs = fr.at("row_sample");
    for (size_t jrow = 1; jrow < rows.size() && jrow - 1 < rs.size(); ++jrow) {
      const int64_t s = rs[jrow - 1].get<int64_t>();
      bool all_in = s >= 0 && static_cast<size_t>(s) < samples.size();
      if (all_in) {
        StageSet<F> diag = rows[jrow].get(field, jrow);
        for (const auto& v : samples[static_cast<size_t>(s)]) {
          if (!diag.contains(field, v)) all_in = false;
        }
      }
      rep.add(jrow, 206, all_in, all_in ? "" : "sample tuple not inside the diagonal stage");
    }
  }
  out.status = rep.ok() ? 0 : 1;
}

}  // namespace

VerifyResult verify_artifact_json(const std::string& json) {
  VerifyResult out;
  ordered_json j;
  try {
    j = ordered_json::parse(json);
    if (j.value("format", std::string()) != kArtifactFormat)
      throw std::invalid_argument("unknown artifact format");
    out.kind = j.value("kind", std::string("build"));
    const auto& fn = j.at("field");
    out.p = fn.value("p", 0u);
    if (out.p == 0) {
      RationalField field;
      verify_with_field(field, j, out);
    } else {
      PrimeClosure field(out.p);
      if (fn.contains("defining") && fn.value("compound_degree", 1u) >= 1) {
        std::map<uint32_t, FpPoly> defs;
        for (const auto& [k, v] : fn.at("defining").items()) {
          FpPoly f;
          for (const auto& c : v) f.push_back(static_cast<uint8_t>(c.get<int>()));
          defs[static_cast<uint32_t>(std::stoul(k))] = std::move(f);
        }
        std::map<uint32_t, std::vector<uint8_t>> gens;
        if (fn.contains("generator_images")) {
          for (const auto& [k, v] : fn.at("generator_images").items()) {
            std::vector<uint8_t> img;
            for (const auto& c : v) img.push_back(static_cast<uint8_t>(c.get<int>()));
            gens[static_cast<uint32_t>(std::stoul(k))] = std::move(img);
          }
        }
        field.adopt_descriptor(fn.value("compound_degree", 1u), defs, gens);
      }
      verify_with_field(field, j, out);
    }
  } catch (const std::exception& e) {
    out.status = 2;
    out.error = e.what();
  }
  return out;
}

}  // namespace topoforge
