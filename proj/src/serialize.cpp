#include "qrbs/serialize.hpp"

namespace qrbs {

nlohmann::json to_json(const GateCounts& counts) {
    return {
        {"x", counts.x},
        {"cx", counts.cnot},
        {"ccx", counts.ccnot},
        {"measure", counts.measure},
        {"total", counts.total},
    };
}

nlohmann::json circuit_metadata(const Circuit& circuit) {
    nlohmann::json qubit_labels = nlohmann::json::array();
    for (std::uint32_t i = 0; i < circuit.num_qubits(); ++i) {
        qubit_labels.push_back(circuit.qubit_label(QubitId{i}));
    }
    nlohmann::json classical_labels = nlohmann::json::array();
    for (std::uint32_t i = 0; i < circuit.num_classical_bits(); ++i) {
        classical_labels.push_back(circuit.classical_label(ClassicalBitId{i}));
    }
    return {
        {"num_qubits", circuit.num_qubits()},
        {"num_classical_bits", circuit.num_classical_bits()},
        {"qubit_labels", std::move(qubit_labels)},
        {"classical_labels", std::move(classical_labels)},
        {"gate_counts", to_json(gate_counts(circuit))},
    };
}

nlohmann::json compiled_map(const CompiledCircuit& compiled) {
    // Arrays rather than objects so declaration order survives serialization.
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& [fact, qubit] : compiled.input_map) {
        inputs.push_back({{"fact", fact}, {"qubit", qubit.value}});
    }
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& binding : compiled.output_map) {
        outputs.push_back(
            {{"fact", binding.fact}, {"qubit", binding.qubit.value}, {"cbit", binding.cbit.value}});
    }
    return {
        {"input_map", std::move(inputs)},
        {"output_map", std::move(outputs)},
        {"ancilla_count", compiled.ancilla_count},
        {"num_qubits", compiled.circuit.num_qubits()},
        {"num_classical_bits", compiled.circuit.num_classical_bits()},
    };
}

}  // namespace qrbs
