#include "doctest.h"

#include <random>
#include <set>

#include "qrbs/error.hpp"
#include "qrbs/rule_model.hpp"
#include "support/generators.hpp"

using namespace qrbs;

namespace {

constexpr const char* kInference = R"(# three chained rules
rule R1: A & B -> X
rule R2: X | C -> Y
rule R3: Y & (D | E) -> R
)";

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a qrbs::Error");
    return ErrorCode::Io;
}

std::vector<FactId> names(std::initializer_list<const char*> list) {
    return {list.begin(), list.end()};
}

void collect_support(const RuleNetwork& net, const FactId& fact, std::set<FactId>& out) {
    if (!out.insert(fact).second) {
        return;
    }
    if (const Rule* rule = net.rule_for(fact)) {
        for (const auto& atom : rule->antecedent.atoms()) {
            collect_support(net, atom, out);
        }
    }
}

}  // namespace

TEST_CASE("fact names") {
    CHECK(is_valid_fact_name("A"));
    CHECK(is_valid_fact_name("III-A"));
    CHECK(is_valid_fact_name("T2N1M0"));
    CHECK(is_valid_fact_name("_x9"));
    CHECK_FALSE(is_valid_fact_name(""));
    CHECK_FALSE(is_valid_fact_name("-A"));
    CHECK_FALSE(is_valid_fact_name("a b"));
    CHECK_FALSE(is_valid_fact_name("a.b"));
}

TEST_CASE("single rule parses into inputs, one rule and an output") {
    const auto net = parse_rules("rule: A & B -> X");
    CHECK(net.inputs() == names({"A", "B"}));
    REQUIRE(net.rules().size() == 1);
    CHECK(net.rules()[0].consequent == "X");
    CHECK(net.rules()[0].antecedent == BoolExpr::conj(BoolExpr::atom("A"), BoolExpr::atom("B")));
    CHECK(net.outputs() == names({"X"}));
}

TEST_CASE("empty text is an empty network error") {
    CHECK(code_of([] { parse_rules(""); }) == ErrorCode::EmptyNetwork);
    CHECK(code_of([] { parse_rules("# only a comment\n\n"); }) == ErrorCode::EmptyNetwork);
}

TEST_CASE("three-rule inference network") {
    const auto net = parse_rules(kInference);
    CHECK(net.inputs() == names({"A", "B", "C", "D", "E"}));
    REQUIRE(net.rules().size() == 3);
    CHECK(net.rules()[0].name == "R1");
    CHECK(net.rules()[0].consequent == "X");
    CHECK(net.rules()[1].consequent == "Y");
    CHECK(net.rules()[2].consequent == "R");
    CHECK(net.outputs() == names({"R"}));
}

TEST_CASE("operator precedence and associativity") {
    using E = BoolExpr;
    const auto a = E::atom("a"), b = E::atom("b"), c = E::atom("c");
    CHECK(parse_expression("a | b & c") == E::disj(a, E::conj(b, c)));
    CHECK(parse_expression("!a & b") == E::conj(E::negate(a), b));
    CHECK(parse_expression("a & b & c") == E::conj(E::conj(a, b), c));
    CHECK(parse_expression("!!a") == E::negate(E::negate(a)));
    CHECK(parse_expression("(a | b) & c") == E::conj(E::disj(a, b), c));

    ParseOptions with_implication;
    with_implication.allow_implication = true;
    CHECK(parse_expression("a => b => c", with_implication) == E::implies(a, E::implies(b, c)));
    CHECK(parse_expression("a | b => c", with_implication) == E::implies(E::disj(a, b), c));
    CHECK(code_of([] { parse_expression("a => b"); }) == ErrorCode::Syntax);
}

TEST_CASE("hyphenated names and arrows") {
    const auto net = parse_rules("rule: A->X-1");
    CHECK(net.inputs() == names({"A"}));
    CHECK(net.rules()[0].consequent == "X-1");
}

TEST_CASE("syntax errors report line and column") {
    try {
        parse_rules("rule: A -> X\nrule: A & -> Y\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.code() == ErrorCode::Syntax);
        CHECK(e.line() == 2);
        CHECK(e.column() == 11);
    }
    CHECK(code_of([] { parse_rules("rule: (A -> X"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_rules("rule A -> X"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_rules("rule: A B -> X"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_rules("rule: A -> X Y"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_rules("fact: A"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_rules("rule: A => B -> X"); }) == ErrorCode::Syntax);
}

TEST_CASE("structural network errors") {
    CHECK(code_of([] { parse_rules("rule: A -> X\nrule: B -> X"); }) == ErrorCode::DuplicateConsequent);
    CHECK(code_of([] { parse_rules("rule: A -> X\noutputs: Z"); }) == ErrorCode::UnknownAtom);
    CHECK(code_of([] { parse_rules("inputs: A\nrule: A & B -> X"); }) == ErrorCode::UnknownAtom);
    CHECK(code_of([] { parse_rules("rule: X & A -> X"); }) == ErrorCode::Cycle);

    try {
        parse_rules("rule: Y & A -> X\nrule: X -> Y");
        FAIL("expected a cycle");
    } catch (const CycleError& e) {
        const std::set<FactId> in_cycle(e.cycle().begin(), e.cycle().end());
        CHECK(in_cycle.count("X") == 1);
        CHECK(in_cycle.count("Y") == 1);
    }
}

TEST_CASE("explicit inputs and outputs clauses") {
    const auto net = parse_rules("inputs: B, A, Z\nrule: A & B -> X\noutputs: X, A");
    CHECK(net.inputs() == names({"B", "A", "Z"}));
    CHECK(net.outputs() == names({"X", "A"}));

    // Outputs default to consequents that no rule reads.
    const auto chained = parse_rules("rule: A -> X\nrule: X -> Y\nrule: B -> Z");
    CHECK(chained.outputs() == names({"Y", "Z"}));
}

TEST_CASE("evaluate_expr") {
    using E = BoolExpr;
    const Assignment one_one{{"p", true}, {"q", true}};
    CHECK(evaluate_expr(E::conj(E::atom("p"), E::atom("q")), one_one));
    for (bool q : {false, true}) {
        CHECK(evaluate_expr(E::implies(E::atom("p"), E::atom("q")), Assignment{{"p", false}, {"q", q}}));
    }
    const Assignment a{{"a", true}, {"b", false}, {"c", false}};
    CHECK(evaluate_expr(E::disj(E::conj(E::atom("a"), E::atom("b")), E::negate(E::atom("c"))), a));
    CHECK(code_of([] { evaluate_expr(BoolExpr::atom("zz"), Assignment{}); }) == ErrorCode::UnassignedAtom);
}

TEST_CASE("topological order") {
    CHECK(topological_order(parse_rules(kInference)) ==
          names({"A", "B", "C", "D", "E", "X", "Y", "R"}));
    CHECK(topological_order(parse_rules("rule: A -> X")) == names({"A", "X"}));
    // Rules declared after their consumers still come first.
    CHECK(topological_order(parse_rules("rule: X | C -> Y\nrule: A & B -> X")) ==
          names({"C", "A", "B", "X", "Y"}));
}

TEST_CASE("evaluate_network on the inference network") {
    const auto net = parse_rules(kInference);
    // A B C D E
    auto r = evaluate_network(net, std::vector<bool>{true, true, false, true, false});
    CHECK(r.at("X"));
    CHECK(r.at("Y"));
    CHECK(r.at("R"));

    r = evaluate_network(net, std::vector<bool>(5, false));
    CHECK_FALSE(r.at("X"));
    CHECK_FALSE(r.at("Y"));
    CHECK_FALSE(r.at("R"));

    r = evaluate_network(net, std::vector<bool>{false, false, true, false, false});
    CHECK_FALSE(r.at("X"));
    CHECK(r.at("Y"));
    CHECK_FALSE(r.at("R"));

    CHECK(code_of([&] { evaluate_network(net, std::vector<bool>{true, true}); }) == ErrorCode::MissingInput);
    CHECK(code_of([&] { evaluate_network(net, Assignment{{"A", true}}); }) == ErrorCode::MissingInput);
}

TEST_CASE("property: DSL round trip") {
    std::mt19937_64 rng(0x5eed01);
    for (int trial = 0; trial < 300; ++trial) {
        const auto net = testing::random_network(rng, 6, 5);
        const auto text = to_dsl(net);
        const auto reparsed = parse_rules(text);
        REQUIRE_MESSAGE(reparsed == net, text);
        CHECK(to_dsl(reparsed) == text);
    }
    const auto net = parse_rules(kInference);
    CHECK(parse_rules(to_dsl(net)) == net);
}

TEST_CASE("property: implication elimination over up to 10 atoms") {
    std::mt19937_64 rng(0x5eed02);
    std::vector<FactId> atoms;
    for (int i = 0; i < 10; ++i) {
        atoms.push_back("a" + std::to_string(i));
    }
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = testing::random_expr(rng, atoms, 3);
        const auto q = testing::random_expr(rng, atoms, 3);
        const auto imp = BoolExpr::implies(p, q);
        const auto alt = BoolExpr::disj(BoolExpr::negate(p), q);
        for (std::uint64_t bits = 0; bits < (1U << atoms.size()); ++bits) {
            Assignment a;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                a[atoms[i]] = ((bits >> i) & 1U) != 0;
            }
            const bool lhs = evaluate_expr(imp, a);
            REQUIRE(lhs == evaluate_expr(alt, a));
            REQUIRE(lhs == testing::truth(imp, atoms, bits));
        }
    }
}

TEST_CASE("property: unreachable inputs never change an output") {
    std::mt19937_64 rng(0x5eed03);
    for (int trial = 0; trial < 200; ++trial) {
        const auto net = testing::random_network(rng, 6, 4);
        const std::size_t k = net.inputs().size();
        for (const auto& output : net.outputs()) {
            std::set<FactId> support;
            collect_support(net, output, support);
            for (std::size_t i = 0; i < k; ++i) {
                if (support.count(net.inputs()[i]) != 0) {
                    continue;
                }
                for (std::uint64_t bits = 0; bits < (1U << k); ++bits) {
                    std::vector<bool> in(k), flipped(k);
                    for (std::size_t j = 0; j < k; ++j) {
                        in[j] = flipped[j] = ((bits >> j) & 1U) != 0;
                    }
                    flipped[i] = !flipped[i];
                    REQUIRE(evaluate_network(net, in).at(output) ==
                            evaluate_network(net, flipped).at(output));
                }
            }
        }
    }
}

TEST_CASE("property: forward evaluation matches the truth-table oracle") {
    std::mt19937_64 rng(0x5eed04);
    for (int trial = 0; trial < 200; ++trial) {
        const auto net = testing::random_network(rng, 5, 4);
        const std::size_t k = net.inputs().size();
        for (std::uint64_t bits = 0; bits < (1U << k); ++bits) {
            std::vector<bool> in(k);
            for (std::size_t j = 0; j < k; ++j) {
                in[j] = ((bits >> j) & 1U) != 0;
            }
            const auto values = evaluate_network(net, in);
            // Rules only read earlier facts, so extending the bit vector in
            // declaration order gives each rule a complete environment.
            std::vector<FactId> env = net.inputs();
            std::uint64_t env_bits = bits;
            for (const auto& rule : net.rules()) {
                const bool v = testing::truth(rule.antecedent, env, env_bits);
                REQUIRE(values.at(rule.consequent) == v);
                env_bits |= static_cast<std::uint64_t>(v) << env.size();
                env.push_back(rule.consequent);
            }
        }
    }
}
