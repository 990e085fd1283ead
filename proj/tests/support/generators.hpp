#pragma once

// Seeded random generators shared by the property tests and the acceptance suite.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrbs/circuit.hpp"
#include "qrbs/rule_model.hpp"

namespace qrbs::testing {

inline BoolExpr random_expr(std::mt19937_64& rng, const std::vector<FactId>& facts, int depth) {
    std::uniform_int_distribution<int> pick_fact(0, static_cast<int>(facts.size()) - 1);
    std::uniform_int_distribution<int> pick_op(0, 9);
    if (depth <= 0) {
        return BoolExpr::atom(facts[static_cast<std::size_t>(pick_fact(rng))]);
    }
    const int op = pick_op(rng);
    if (op < 3) {
        return BoolExpr::atom(facts[static_cast<std::size_t>(pick_fact(rng))]);
    }
    if (op < 5) {
        return BoolExpr::negate(random_expr(rng, facts, depth - 1));
    }
    BoolExpr lhs = random_expr(rng, facts, depth - 1);
    BoolExpr rhs = random_expr(rng, facts, depth - 1);
    return op < 8 ? BoolExpr::conj(std::move(lhs), std::move(rhs))
                  : BoolExpr::disj(std::move(lhs), std::move(rhs));
}

/// Acyclic network with 1..max_inputs inputs and 1..max_rules rules. Each
/// rule reads only inputs and earlier consequents. Outputs are every
/// consequent plus, sometimes, one input.
inline RuleNetwork random_network(std::mt19937_64& rng, int max_inputs, int max_rules) {
    std::uniform_int_distribution<int> n_inputs(1, max_inputs);
    std::uniform_int_distribution<int> n_rules(1, max_rules);
    std::uniform_int_distribution<int> depth(0, 3);
    const int k = n_inputs(rng);
    const int r = n_rules(rng);

    std::vector<FactId> inputs;
    for (int i = 0; i < k; ++i) {
        inputs.push_back("i" + std::to_string(i));
    }
    std::vector<FactId> known = inputs;
    std::vector<Rule> rules;
    std::vector<FactId> outputs;
    for (int j = 0; j < r; ++j) {
        const FactId consequent = "f" + std::to_string(j);
        rules.push_back({"", random_expr(rng, known, depth(rng)), consequent});
        known.push_back(consequent);
        outputs.push_back(consequent);
    }
    if (std::bernoulli_distribution(0.25)(rng)) {
        outputs.push_back(inputs[std::uniform_int_distribution<std::size_t>(0, inputs.size() - 1)(rng)]);
    }
    return RuleNetwork::make(std::move(inputs), std::move(rules), std::move(outputs));
}

/// Unitary gate on `num_qubits` qubits (CCNOT needs at least 3).
inline Gate random_unitary_gate(std::mt19937_64& rng, std::size_t num_qubits) {
    std::uniform_int_distribution<std::uint32_t> qubit(0, static_cast<std::uint32_t>(num_qubits) - 1);
    const int max_kind = num_qubits >= 3 ? 2 : (num_qubits >= 2 ? 1 : 0);
    const int kind = std::uniform_int_distribution<int>(0, max_kind)(rng);
    std::vector<std::uint32_t> picked;
    const std::size_t need = static_cast<std::size_t>(kind) + 1;
    while (picked.size() < need) {
        const std::uint32_t q = qubit(rng);
        if (std::find(picked.begin(), picked.end(), q) == picked.end()) {
            picked.push_back(q);
        }
    }
    switch (kind) {
        case 0: return Gate::x(QubitId{picked[0]});
        case 1: return Gate::cnot(QubitId{picked[0]}, QubitId{picked[1]});
        default: return Gate::ccnot(QubitId{picked[0]}, QubitId{picked[1]}, QubitId{picked[2]});
    }
}

/// Random unitary circuit, optionally followed by measuring every qubit.
inline Circuit random_circuit(std::mt19937_64& rng, std::size_t num_qubits, std::size_t num_gates,
                              bool measure_all) {
    Circuit circuit(num_qubits, measure_all ? num_qubits : 0);
    for (std::size_t g = 0; g < num_gates; ++g) {
        circuit.append(random_unitary_gate(rng, num_qubits));
    }
    if (measure_all) {
        for (std::uint32_t q = 0; q < num_qubits; ++q) {
            circuit.append(Gate::measure(QubitId{q}, ClassicalBitId{q}));
        }
    }
    return circuit;
}

/// Plain truth-table evaluation of an expression, independent of the library evaluator.
inline bool truth(const BoolExpr& expr, const std::vector<FactId>& names, std::uint64_t bits) {
    switch (expr.kind()) {
        case BoolExpr::Kind::Atom: {
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (names[i] == expr.name()) {
                    return ((bits >> i) & 1U) != 0;
                }
            }
            throw std::runtime_error("unbound atom " + expr.name());
        }
        case BoolExpr::Kind::Not: return !truth(expr.lhs(), names, bits);
        case BoolExpr::Kind::And: return truth(expr.lhs(), names, bits) && truth(expr.rhs(), names, bits);
        case BoolExpr::Kind::Or: return truth(expr.lhs(), names, bits) || truth(expr.rhs(), names, bits);
        case BoolExpr::Kind::Implies: return !truth(expr.lhs(), names, bits) || truth(expr.rhs(), names, bits);
    }
    return false;
}

}  // namespace qrbs::testing
