#pragma once

#include <json.hpp>

#include "reframe/core/attributes.hpp"
#include "reframe/core/types.hpp"

namespace reframe {

nlohmann::json traps_to_json(const TrapSet& traps);
/// Throws Error(UnknownTrap) on an unknown name.
TrapSet traps_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AttributeVector& v);
AttributeVector attribute_vector_from_json(const nlohmann::json& j);

/// Dataset line schema: {id, source, situation, thought, reframe_a, reframe_b,
/// traps_a, traps_b, comparisons}.
nlohmann::json to_json(const DatasetEntry& e);
/// Structural decoding only; invariants are checked by validate_entry.
/// Throws nlohmann::json::exception or reframe::Error on bad shape.
DatasetEntry dataset_entry_from_json(const nlohmann::json& j);

}  // namespace reframe
