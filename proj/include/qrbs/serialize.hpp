#pragma once

#include "json.hpp"
#include "qrbs/circuit.hpp"
#include "qrbs/compiler.hpp"

namespace qrbs {

/// Widths, labels and gate counts.
nlohmann::json circuit_metadata(const Circuit& circuit);

/// input_map, output_map and ancilla_count of a compiled network.
nlohmann::json compiled_map(const CompiledCircuit& compiled);

nlohmann::json to_json(const GateCounts& counts);

}  // namespace qrbs
