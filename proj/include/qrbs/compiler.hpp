#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrbs/circuit.hpp"
#include "qrbs/rule_model.hpp"

namespace qrbs {

struct CompileOptions {
    /// Reuse one result qubit for structurally identical (flattened) subexpressions.
    bool share_subexpressions = true;
    /// Let a fact that reduces to an existing qubit (bare input, alias chain)
    /// be read and measured from that qubit instead of copying it to an ancilla.
    bool measure_inputs_directly = true;
    /// Maximum number of ancillae; unlimited when unset.
    std::optional<std::size_t> ancilla_budget;
};

struct OutputBinding {
    FactId fact;
    QubitId qubit;
    ClassicalBitId cbit;

    friend bool operator==(const OutputBinding&, const OutputBinding&) = default;
};

struct CompiledCircuit {
    Circuit circuit;
    /// Input facts in declaration order; input i sits on qubit i.
    std::vector<std::pair<FactId, QubitId>> input_map;
    /// Output facts in declaration order; output k is measured into c_k.
    std::vector<OutputBinding> output_map;
    std::size_t ancilla_count = 0;
};

/**
 * Allocation state for lowering expressions: the fact-to-qubit map, the
 * gate list under construction, and the subexpression memo.
 *
 * And(a, b) becomes CCNOT(a, b, t); Or(a, b) becomes CNOT(a, t), CNOT(b, t),
 * CCNOT(a, b, t); Not(a) becomes CNOT(a, t), X(t); each t is a fresh ancilla.
 * Chains of the same associative operator are flattened and folded from the
 * left. Implies(p, q) is lowered as Or(Not p, q).
 */
class CompileContext {
  public:
    CompileContext(std::size_t num_inputs, CompileOptions options);

    void bind(const FactId& fact, QubitId qubit);
    std::optional<QubitId> lookup(const FactId& fact) const;

    /// Lowers `expr` and returns the qubit holding its value.
    QubitId compile(const BoolExpr& expr);

    /// Copies `source` onto a fresh ancilla with one CNOT.
    QubitId copy(QubitId source);

    QubitId fresh_ancilla();

    std::size_t num_qubits() const noexcept { return next_qubit_; }
    std::size_t ancilla_count() const noexcept { return next_qubit_ - num_inputs_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }

  private:
    struct Lowered {
        QubitId qubit;
        std::string key;
    };

    Lowered lower(const BoolExpr& expr);
    QubitId combine(BoolExpr::Kind op, QubitId lhs, QubitId rhs);

    std::size_t num_inputs_;
    CompileOptions options_;
    std::size_t next_qubit_;
    std::map<FactId, QubitId, std::less<>> facts_;
    std::map<std::string, QubitId, std::less<>> memo_;
    std::vector<Gate> gates_;
};

/// Convenience: lowers one expression whose atoms are the given qubits.
struct ExprCircuit {
    QubitId result;
    std::vector<Gate> gates;
    std::size_t ancilla_count;
};

ExprCircuit compile_expr(const BoolExpr& expr, const std::vector<FactId>& inputs,
                         CompileOptions options = {});

/**
 * Lowers a network: inputs on q0..q(k-1) in declaration order, rules in
 * topological order, and one terminal Measure per output fact in output
 * order. Identical (network, options) yield identical circuits.
 */
CompiledCircuit compile_network(const RuleNetwork& network, const CompileOptions& options = {});

struct Mismatch {
    std::vector<bool> inputs;
    FactId fact;
    bool expected;
    bool actual;
};

struct VerificationReport {
    std::size_t assignments_checked = 0;
    std::vector<Mismatch> mismatches;

    bool ok() const noexcept { return mismatches.empty(); }
};

/// Input-width cap for exhaustive verification.
inline constexpr std::size_t kVerifyInputCap = 16;

/// Runs every input assignment (ancillae at 0) through the circuit and
/// compares the measured bits with forward evaluation.
VerificationReport verify_compilation(const RuleNetwork& network, const CompiledCircuit& compiled);

/// Same check restricted to the given assignments.
VerificationReport verify_compilation(const RuleNetwork& network, const CompiledCircuit& compiled,
                                      const std::vector<std::vector<bool>>& assignments);

}  // namespace qrbs
