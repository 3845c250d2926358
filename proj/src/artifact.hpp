#pragma once

#include <string>

#include "field.hpp"
#include "matrix.hpp"
#include "ratfield.hpp"

namespace topoforge {

inline constexpr const char* kArtifactFormat = "topoforge-stage-matrix-v1";

std::string artifact_to_json(PrimeClosure& field, const BuildArtifact<PrimeClosure>& art, bool pretty = false);
std::string artifact_to_json(RationalField& field, const BuildArtifact<RationalField>& art, bool pretty = false);

std::string report_to_json(const VerificationReport& rep, bool pretty = false);

// Re-formats an artifact (or any) JSON document; throws on parse errors.
std::string reformat_json(const std::string& json, bool pretty);

// ---------------------------------------------------------------------------
// independent re-verification, trusting only element-level set data

struct VerifyResult {
  // 0 certified, 1 failed, 2 malformed
  int status = 2;
  VerificationReport report;
  std::string error;
  std::string kind;
  uint32_t p = 0;
  size_t rows = 0;
};

VerifyResult verify_artifact_json(const std::string& json);

}  // namespace topoforge
