#pragma once

#include <string>

#include <json.hpp>

#include "pqca/tessellation.hpp"

namespace pqca {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Tessellation& t);
Tessellation tessellation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AuditReport& r);

// FNV-1a over the canonical JSON encoding; stable content address for run
// manifests.
std::string content_hash(const Tessellation& t);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace pqca
