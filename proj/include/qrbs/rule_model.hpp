#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrbs {

using FactId = std::string;

/// Truth assignment keyed by fact name.
using Assignment = std::map<FactId, bool, std::less<>>;

/// Letters, digits, '_' and '-', not starting with '-'.
bool is_valid_fact_name(std::string_view name) noexcept;

/**
 * Immutable propositional formula. Copies share the underlying tree, so
 * values are cheap to pass around and safe to read from several threads.
 */
class BoolExpr {
  public:
    enum class Kind { Atom, Not, And, Or, Implies };

    static BoolExpr atom(FactId name);
    static BoolExpr negate(BoolExpr operand);
    static BoolExpr conj(BoolExpr lhs, BoolExpr rhs);
    static BoolExpr disj(BoolExpr lhs, BoolExpr rhs);
    static BoolExpr implies(BoolExpr premise, BoolExpr conclusion);

    Kind kind() const noexcept;
    bool is_atom() const noexcept { return kind() == Kind::Atom; }

    /// Fact name; only valid for atoms.
    const FactId& name() const;
    /// Operand of Not, left operand of binary nodes.
    const BoolExpr& lhs() const;
    /// Right operand of binary nodes.
    const BoolExpr& rhs() const;

    /// Atom names in first-mention (left-to-right) order, without duplicates.
    std::vector<FactId> atoms() const;

    friend bool operator==(const BoolExpr& a, const BoolExpr& b);

  private:
    struct Node;
    explicit BoolExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Renders with the DSL operators and the minimum parentheses needed to reparse.
std::string to_string(const BoolExpr& expr);

struct Rule {
    std::string name;  // optional label, empty if absent
    BoolExpr antecedent;
    FactId consequent;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/**
 * Acyclic network of rules. Instances are only produced through `make` or
 * the parser, both of which enforce the invariants: unique consequents,
 * no consequent among the inputs, every atom and output resolvable, and an
 * acyclic dependency graph.
 */
class RuleNetwork {
  public:
    static RuleNetwork make(std::vector<FactId> inputs, std::vector<Rule> rules,
                            std::vector<FactId> outputs);

    const std::vector<FactId>& inputs() const noexcept { return inputs_; }
    const std::vector<Rule>& rules() const noexcept { return rules_; }
    const std::vector<FactId>& outputs() const noexcept { return outputs_; }

    bool is_input(std::string_view fact) const;
    /// Rule concluding `fact`, or nullptr for inputs.
    const Rule* rule_for(std::string_view fact) const;

    friend bool operator==(const RuleNetwork&, const RuleNetwork&) = default;

  private:
    RuleNetwork() = default;

    std::vector<FactId> inputs_;
    std::vector<Rule> rules_;
    std::vector<FactId> outputs_;
};

struct ParseOptions {
    /// Accept `=>` inside expressions (constraint files only).
    bool allow_implication = false;
};

/// Parses one expression. `line` is used for error positions.
BoolExpr parse_expression(std::string_view text, ParseOptions options = {}, std::size_t line = 1,
                          std::size_t column_offset = 0);

/**
 * Parses rule-DSL text into a network.
 *
 *     # comment
 *     inputs: A, B, C          (optional; fixes input order)
 *     rule R1: A & B -> X
 *     rule: X | C -> Y
 *     outputs: Y               (optional)
 *
 * Without an `inputs:` line, inputs are the non-concluded facts in
 * first-mention order. Without `outputs:`, outputs are the consequents
 * that no rule reads.
 */
RuleNetwork parse_rules(std::string_view text);

/// Canonical DSL text; `parse_rules(to_dsl(n)) == n`.
std::string to_dsl(const RuleNetwork& network);

bool evaluate_expr(const BoolExpr& expr, const Assignment& assignment);

/// Inputs first, then consequents so that antecedents precede their rule.
/// Stable with respect to declaration order.
std::vector<FactId> topological_order(const RuleNetwork& network);

/// Forward evaluation. `inputs[i]` is the value of `network.inputs()[i]`.
Assignment evaluate_network(const RuleNetwork& network, const std::vector<bool>& inputs);
Assignment evaluate_network(const RuleNetwork& network, const Assignment& inputs);

}  // namespace qrbs
