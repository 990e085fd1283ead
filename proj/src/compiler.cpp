#include "qrbs/compiler.hpp"

#include "qrbs/error.hpp"

namespace qrbs {

CompileContext::CompileContext(std::size_t num_inputs, CompileOptions options)
    : num_inputs_(num_inputs), options_(options), next_qubit_(num_inputs) {}

void CompileContext::bind(const FactId& fact, QubitId qubit) { facts_[fact] = qubit; }

std::optional<QubitId> CompileContext::lookup(const FactId& fact) const {
    if (auto it = facts_.find(fact); it != facts_.end()) {
        return it->second;
    }
    return std::nullopt;
}

QubitId CompileContext::fresh_ancilla() {
    if (options_.ancilla_budget && ancilla_count() >= *options_.ancilla_budget) {
        throw Error(ErrorCode::BudgetExceeded,
                    "ancilla budget of " + std::to_string(*options_.ancilla_budget) + " exceeded");
    }
    return QubitId{static_cast<std::uint32_t>(next_qubit_++)};
}

QubitId CompileContext::copy(QubitId source) {
    const QubitId target = fresh_ancilla();
    gates_.push_back(Gate::cnot(source, target));
    return target;
}

QubitId CompileContext::compile(const BoolExpr& expr) { return lower(expr).qubit; }

QubitId CompileContext::combine(BoolExpr::Kind op, QubitId lhs, QubitId rhs) {
    const QubitId target = fresh_ancilla();
    if (op == BoolExpr::Kind::And) {
        gates_.push_back(Gate::ccnot(lhs, rhs, target));
    } else {
        gates_.push_back(Gate::cnot(lhs, target));
        gates_.push_back(Gate::cnot(rhs, target));
        gates_.push_back(Gate::ccnot(lhs, rhs, target));
    }
    return target;
}

namespace {

void flatten(const BoolExpr& expr, BoolExpr::Kind op, std::vector<const BoolExpr*>& out) {
    if (expr.kind() == op) {
        flatten(expr.lhs(), op, out);
        flatten(expr.rhs(), op, out);
    } else {
        out.push_back(&expr);
    }
}

}  // namespace

// Memo keys are written over qubit ids, so facts that alias one qubit share entries.
CompileContext::Lowered CompileContext::lower(const BoolExpr& expr) {
    auto memoized = [&](const std::string& key) -> std::optional<QubitId> {
        if (!options_.share_subexpressions) {
            return std::nullopt;
        }
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        return std::nullopt;
    };
    auto remember = [&](const std::string& key, QubitId qubit) {
        if (options_.share_subexpressions) {
            memo_.emplace(key, qubit);
        }
    };

    switch (expr.kind()) {
        case BoolExpr::Kind::Atom: {
            const auto qubit = lookup(expr.name());
            if (!qubit) {
                throw Error(ErrorCode::UnknownAtom, "atom '" + expr.name() + "' has no qubit");
            }
            return {*qubit, "q" + std::to_string(qubit->value)};
        }
        case BoolExpr::Kind::Implies:
            return lower(BoolExpr::disj(BoolExpr::negate(expr.lhs()), expr.rhs()));
        case BoolExpr::Kind::Not: {
            const Lowered operand = lower(expr.lhs());
            std::string key = "!" + operand.key;
            if (auto hit = memoized(key)) {
                return {*hit, std::move(key)};
            }
            const QubitId target = fresh_ancilla();
            gates_.push_back(Gate::cnot(operand.qubit, target));
            gates_.push_back(Gate::x(target));
            remember(key, target);
            return {target, std::move(key)};
        }
        case BoolExpr::Kind::And:
        case BoolExpr::Kind::Or: {
            const BoolExpr::Kind op = expr.kind();
            const char symbol = op == BoolExpr::Kind::And ? '&' : '|';
            std::vector<const BoolExpr*> operands;
            flatten(expr, op, operands);
            std::vector<Lowered> lowered;
            lowered.reserve(operands.size());
            for (const BoolExpr* operand : operands) {
                lowered.push_back(lower(*operand));
            }
            Lowered acc = lowered.front();
            for (std::size_t i = 1; i < lowered.size(); ++i) {
                const Lowered& next = lowered[i];
                if (next.qubit == acc.qubit) {
                    continue;  // a & a == a | a == a
                }
                std::string key = std::string(1, symbol) + "(" + acc.key + "," + next.key + ")";
                if (auto hit = memoized(key)) {
                    acc = {*hit, std::move(key)};
                    continue;
                }
                const QubitId target = combine(op, acc.qubit, next.qubit);
                remember(key, target);
                acc = {target, std::move(key)};
            }
            return acc;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unhandled expression kind");
}

ExprCircuit compile_expr(const BoolExpr& expr, const std::vector<FactId>& inputs,
                         CompileOptions options) {
    CompileContext context(inputs.size(), options);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        context.bind(inputs[i], QubitId{static_cast<std::uint32_t>(i)});
    }
    const QubitId result = context.compile(expr);
    return {result, context.gates(), context.ancilla_count()};
}

CompiledCircuit compile_network(const RuleNetwork& network, const CompileOptions& options) {
    const auto& inputs = network.inputs();
    CompileContext context(inputs.size(), options);
    std::map<std::uint32_t, std::string> fact_labels;

    CompiledCircuit compiled;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const QubitId qubit{static_cast<std::uint32_t>(i)};
        context.bind(inputs[i], qubit);
        compiled.input_map.emplace_back(inputs[i], qubit);
        fact_labels.emplace(qubit.value, inputs[i]);
    }

    for (const auto& fact : topological_order(network)) {
        const Rule* rule = network.rule_for(fact);
        if (rule == nullptr) {
            continue;
        }
        const std::size_t before = context.num_qubits();
        QubitId result = context.compile(rule->antecedent);
        if (!options.measure_inputs_directly && result.value < before) {
            result = context.copy(result);
        }
        context.bind(fact, result);
        fact_labels.emplace(result.value, fact);
    }

    for (std::size_t k = 0; k < network.outputs().size(); ++k) {
        const FactId& fact = network.outputs()[k];
        QubitId qubit = *context.lookup(fact);
        if (!options.measure_inputs_directly && network.is_input(fact)) {
            qubit = context.copy(qubit);
            fact_labels.emplace(qubit.value, fact);
        }
        compiled.output_map.push_back({fact, qubit, ClassicalBitId{static_cast<std::uint32_t>(k)}});
    }

    Circuit circuit(context.num_qubits(), network.outputs().size());
    for (const auto& gate : context.gates()) {
        circuit.append(gate);
    }
    for (const auto& binding : compiled.output_map) {
        circuit.append(Gate::measure(binding.qubit, binding.cbit));
        circuit.set_classical_label(binding.cbit, binding.fact);
    }
    for (const auto& [qubit, label] : fact_labels) {
        circuit.set_qubit_label(QubitId{qubit}, label);
    }

    compiled.circuit = std::move(circuit);
    compiled.ancilla_count = context.ancilla_count();
    return compiled;
}

// ---------------------------------------------------------------------------

VerificationReport verify_compilation(const RuleNetwork& network, const CompiledCircuit& compiled) {
    const std::size_t k = network.inputs().size();
    if (k > kVerifyInputCap) {
        throw Error(ErrorCode::CapExceeded, "exhaustive verification limited to " +
                                                std::to_string(kVerifyInputCap) + " inputs, got " +
                                                std::to_string(k));
    }
    std::vector<std::vector<bool>> assignments;
    assignments.reserve(std::size_t{1} << k);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        std::vector<bool> assignment(k);
        for (std::size_t i = 0; i < k; ++i) {
            assignment[i] = ((bits >> i) & 1U) != 0;
        }
        assignments.push_back(std::move(assignment));
    }
    return verify_compilation(network, compiled, assignments);
}

VerificationReport verify_compilation(const RuleNetwork& network, const CompiledCircuit& compiled,
                                      const std::vector<std::vector<bool>>& assignments) {
    if (compiled.circuit.num_qubits() > 64) {
        throw Error(ErrorCode::CapExceeded, "basis-state verification limited to 64 qubits");
    }
    VerificationReport report;
    for (const auto& assignment : assignments) {
        if (assignment.size() != compiled.input_map.size()) {
            throw Error(ErrorCode::MissingInput, "assignment width does not match the input map");
        }
        std::uint64_t basis = 0;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i]) {
                basis |= std::uint64_t{1} << compiled.input_map[i].second.value;
            }
        }
        const std::vector<bool> measured = measure_basis_state(compiled.circuit, basis);
        const Assignment expected = evaluate_network(network, assignment);
        for (const auto& binding : compiled.output_map) {
            const bool want = expected.at(binding.fact);
            const bool got = measured[binding.cbit.value];
            if (want != got) {
                report.mismatches.push_back({assignment, binding.fact, want, got});
            }
        }
        ++report.assignments_checked;
    }
    return report;
}

}  // namespace qrbs
