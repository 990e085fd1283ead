#include "qrbs/rule_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qrbs/error.hpp"

namespace qrbs {

struct BoolExpr::Node {
    Kind kind;
    FactId name;
    std::optional<BoolExpr> lhs;
    std::optional<BoolExpr> rhs;
};

BoolExpr BoolExpr::atom(FactId name) {
    return BoolExpr(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), {}, {}}));
}

BoolExpr BoolExpr::negate(BoolExpr operand) {
    return BoolExpr(std::make_shared<const Node>(Node{Kind::Not, {}, std::move(operand), {}}));
}

BoolExpr BoolExpr::conj(BoolExpr lhs, BoolExpr rhs) {
    return BoolExpr(
        std::make_shared<const Node>(Node{Kind::And, {}, std::move(lhs), std::move(rhs)}));
}

BoolExpr BoolExpr::disj(BoolExpr lhs, BoolExpr rhs) {
    return BoolExpr(
        std::make_shared<const Node>(Node{Kind::Or, {}, std::move(lhs), std::move(rhs)}));
}

BoolExpr BoolExpr::implies(BoolExpr premise, BoolExpr conclusion) {
    return BoolExpr(std::make_shared<const Node>(
        Node{Kind::Implies, {}, std::move(premise), std::move(conclusion)}));
}

BoolExpr::Kind BoolExpr::kind() const noexcept { return node_->kind; }

const FactId& BoolExpr::name() const {
    if (node_->kind != Kind::Atom) {
        throw Error(ErrorCode::InvalidArgument, "name() called on a non-atom expression");
    }
    return node_->name;
}

const BoolExpr& BoolExpr::lhs() const {
    if (!node_->lhs) {
        throw Error(ErrorCode::InvalidArgument, "lhs() called on an atom");
    }
    return *node_->lhs;
}

const BoolExpr& BoolExpr::rhs() const {
    if (!node_->rhs) {
        throw Error(ErrorCode::InvalidArgument, "rhs() called on a unary expression");
    }
    return *node_->rhs;
}

namespace {

void collect_atoms(const BoolExpr& expr, std::vector<FactId>& out, std::set<FactId>& seen) {
    switch (expr.kind()) {
        case BoolExpr::Kind::Atom:
            if (seen.insert(expr.name()).second) {
                out.push_back(expr.name());
            }
            return;
        case BoolExpr::Kind::Not:
            collect_atoms(expr.lhs(), out, seen);
            return;
        default:
            collect_atoms(expr.lhs(), out, seen);
            collect_atoms(expr.rhs(), out, seen);
            return;
    }
}

}  // namespace

std::vector<FactId> BoolExpr::atoms() const {
    std::vector<FactId> out;
    std::set<FactId> seen;
    collect_atoms(*this, out, seen);
    return out;
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
        case BoolExpr::Kind::Atom: return a.name() == b.name();
        case BoolExpr::Kind::Not: return a.lhs() == b.lhs();
        default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; higher binds tighter.
int precedence(BoolExpr::Kind kind) {
    switch (kind) {
        case BoolExpr::Kind::Implies: return 1;
        case BoolExpr::Kind::Or: return 2;
        case BoolExpr::Kind::And: return 3;
        case BoolExpr::Kind::Not: return 4;
        case BoolExpr::Kind::Atom: return 5;
    }
    return 0;
}

void print(const BoolExpr& expr, std::string& out);

void print_operand(const BoolExpr& operand, int min_precedence, std::string& out) {
    if (precedence(operand.kind()) < min_precedence) {
        out += '(';
        print(operand, out);
        out += ')';
    } else {
        print(operand, out);
    }
}

void print(const BoolExpr& expr, std::string& out) {
    const int own = precedence(expr.kind());
    switch (expr.kind()) {
        case BoolExpr::Kind::Atom:
            out += expr.name();
            return;
        case BoolExpr::Kind::Not:
            out += '!';
            print_operand(expr.lhs(), own, out);
            return;
        case BoolExpr::Kind::And:
        case BoolExpr::Kind::Or:
            // Left-associative: a right operand of equal precedence needs parens.
            print_operand(expr.lhs(), own, out);
            out += expr.kind() == BoolExpr::Kind::And ? " & " : " | ";
            print_operand(expr.rhs(), own + 1, out);
            return;
        case BoolExpr::Kind::Implies:
            // Right-associative.
            print_operand(expr.lhs(), own + 1, out);
            out += " => ";
            print_operand(expr.rhs(), own, out);
            return;
    }
}

}  // namespace

std::string to_string(const BoolExpr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

// ---------------------------------------------------------------------------
// Lexing and parsing

bool is_valid_fact_name(std::string_view name) noexcept {
    if (name.empty() || name.front() == '-') {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

namespace {

enum class Tok { Ident, Not, And, Or, Arrow, Implies, LParen, RParen, Colon, Comma, End };

const char* describe(Tok tok) {
    switch (tok) {
        case Tok::Ident: return "identifier";
        case Tok::Not: return "'!'";
        case Tok::And: return "'&'";
        case Tok::Or: return "'|'";
        case Tok::Arrow: return "'->'";
        case Tok::Implies: return "'=>'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::End: return "end of line";
    }
    return "token";
}

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;  // 1-based
};

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<Token> tokenize(std::string_view text, std::size_t line, std::size_t column_offset) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        const std::size_t column = column_offset + i + 1;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') {
            break;
        }
        auto single = [&](Tok kind) {
            tokens.push_back({kind, std::string(1, c), column});
            ++i;
        };
        switch (c) {
            case '!': single(Tok::Not); continue;
            case '&': single(Tok::And); continue;
            case '|': single(Tok::Or); continue;
            case '(': single(Tok::LParen); continue;
            case ')': single(Tok::RParen); continue;
            case ':': single(Tok::Colon); continue;
            case ',': single(Tok::Comma); continue;
            default: break;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            tokens.push_back({Tok::Arrow, "->", column});
            i += 2;
            continue;
        }
        if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
            tokens.push_back({Tok::Implies, "=>", column});
            i += 2;
            continue;
        }
        if (is_ident_char(c) && c != '-') {
            std::size_t end = i;
            while (end < text.size() && is_ident_char(text[end])) {
                // "A->X": the hyphen belongs to the arrow, not the identifier.
                if (text[end] == '-' && end + 1 < text.size() && text[end + 1] == '>') {
                    break;
                }
                ++end;
            }
            tokens.push_back({Tok::Ident, std::string(text.substr(i, end - i)), column});
            i = end;
            continue;
        }
        throw SyntaxError(line, column, std::string("unexpected character '") + c + "'");
    }
    tokens.push_back({Tok::End, "", column_offset + text.size() + 1});
    return tokens;
}

class ExprParser {
  public:
    ExprParser(const std::vector<Token>& tokens, std::size_t pos, ParseOptions options,
               std::size_t line)
        : tokens_(tokens), pos_(pos), options_(options), line_(line) {}

    BoolExpr parse() { return implication(); }

    std::size_t position() const { return pos_; }

  private:
    const Token& peek() const { return tokens_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(line_, peek().column, what);
    }

    BoolExpr implication() {
        BoolExpr lhs = disjunction();
        if (peek().kind == Tok::Implies) {
            if (!options_.allow_implication) {
                fail("'=>' is only allowed in constraint files");
            }
            ++pos_;
            return BoolExpr::implies(std::move(lhs), implication());
        }
        return lhs;
    }

    BoolExpr disjunction() {
        BoolExpr acc = conjunction();
        while (peek().kind == Tok::Or) {
            ++pos_;
            acc = BoolExpr::disj(std::move(acc), conjunction());
        }
        return acc;
    }

    BoolExpr conjunction() {
        BoolExpr acc = factor();
        while (peek().kind == Tok::And) {
            ++pos_;
            acc = BoolExpr::conj(std::move(acc), factor());
        }
        return acc;
    }

    BoolExpr factor() {
        const Token& tok = peek();
        switch (tok.kind) {
            case Tok::Not:
                ++pos_;
                return BoolExpr::negate(factor());
            case Tok::LParen: {
                ++pos_;
                BoolExpr inner = implication();
                if (peek().kind != Tok::RParen) {
                    fail(std::string("expected ')' but found ") + describe(peek().kind));
                }
                ++pos_;
                return inner;
            }
            case Tok::Ident:
                ++pos_;
                return BoolExpr::atom(tok.text);
            default:
                fail(std::string("expected an expression but found ") + describe(tok.kind));
        }
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_;
    ParseOptions options_;
    std::size_t line_;
};

struct SourceLine {
    std::size_t number;
    std::string_view text;
};

std::vector<SourceLine> split_lines(std::string_view text) {
    std::vector<SourceLine> lines;
    std::size_t number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::size_t stop = end == std::string_view::npos ? text.size() : end;
        lines.push_back({number++, text.substr(start, stop - start)});
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return lines;
}

std::vector<FactId> parse_ident_list(const std::vector<Token>& tokens, std::size_t pos,
                                     std::size_t line) {
    std::vector<FactId> names;
    while (true) {
        if (tokens[pos].kind != Tok::Ident) {
            throw SyntaxError(line, tokens[pos].column,
                              std::string("expected identifier but found ") +
                                  describe(tokens[pos].kind));
        }
        names.push_back(tokens[pos].text);
        ++pos;
        if (tokens[pos].kind == Tok::End) {
            return names;
        }
        if (tokens[pos].kind != Tok::Comma) {
            throw SyntaxError(line, tokens[pos].column,
                              std::string("expected ',' but found ") + describe(tokens[pos].kind));
        }
        ++pos;
    }
}

}  // namespace

BoolExpr parse_expression(std::string_view text, ParseOptions options, std::size_t line,
                          std::size_t column_offset) {
    const auto tokens = tokenize(text, line, column_offset);
    ExprParser parser(tokens, 0, options, line);
    BoolExpr expr = parser.parse();
    const Token& rest = tokens[parser.position()];
    if (rest.kind != Tok::End) {
        throw SyntaxError(line, rest.column,
                          std::string("unexpected ") + describe(rest.kind) + " after expression");
    }
    return expr;
}

RuleNetwork parse_rules(std::string_view text) {
    std::vector<Rule> rules;
    std::optional<std::vector<FactId>> declared_inputs;
    std::optional<std::vector<FactId>> declared_outputs;
    std::unordered_map<FactId, std::size_t> consequent_line;

    for (const auto& [number, line] : split_lines(text)) {
        const auto tokens = tokenize(line, number, 0);
        if (tokens.front().kind == Tok::End) {
            continue;
        }
        const Token& head = tokens.front();
        if (head.kind != Tok::Ident) {
            throw SyntaxError(number, head.column, "expected 'rule', 'inputs' or 'outputs'");
        }
        if (head.text == "inputs" || head.text == "outputs") {
            if (tokens[1].kind != Tok::Colon) {
                throw SyntaxError(number, tokens[1].column, "expected ':' after " + head.text);
            }
            auto& slot = head.text == "inputs" ? declared_inputs : declared_outputs;
            if (slot) {
                throw SyntaxError(number, head.column, "duplicate '" + head.text + "' clause");
            }
            slot = parse_ident_list(tokens, 2, number);
            continue;
        }
        if (head.text != "rule") {
            throw SyntaxError(number, head.column,
                              "expected 'rule', 'inputs' or 'outputs' but found '" + head.text +
                                  "'");
        }
        std::size_t pos = 1;
        std::string name;
        if (tokens[pos].kind == Tok::Ident) {
            name = tokens[pos].text;
            ++pos;
        }
        if (tokens[pos].kind != Tok::Colon) {
            throw SyntaxError(number, tokens[pos].column,
                              std::string("expected ':' but found ") + describe(tokens[pos].kind));
        }
        ++pos;
        ExprParser parser(tokens, pos, ParseOptions{}, number);
        BoolExpr antecedent = parser.parse();
        pos = parser.position();
        if (tokens[pos].kind != Tok::Arrow) {
            throw SyntaxError(number, tokens[pos].column,
                              std::string("expected '->' but found ") + describe(tokens[pos].kind));
        }
        ++pos;
        if (tokens[pos].kind != Tok::Ident) {
            throw SyntaxError(number, tokens[pos].column,
                              std::string("expected consequent identifier but found ") +
                                  describe(tokens[pos].kind));
        }
        const Token& consequent = tokens[pos];
        ++pos;
        if (tokens[pos].kind != Tok::End) {
            throw SyntaxError(number, tokens[pos].column,
                              std::string("unexpected ") + describe(tokens[pos].kind) +
                                  " after consequent");
        }
        if (auto it = consequent_line.find(consequent.text); it != consequent_line.end()) {
            throw Error(ErrorCode::DuplicateConsequent,
                        "duplicate consequent '" + consequent.text + "' at line " +
                            std::to_string(number) + " (first concluded at line " +
                            std::to_string(it->second) + "); merge the rules with '|'");
        }
        consequent_line.emplace(consequent.text, number);
        rules.push_back(Rule{std::move(name), std::move(antecedent), consequent.text});
    }

    if (rules.empty() && !declared_inputs) {
        throw Error(ErrorCode::EmptyNetwork, "empty network: no rules");
    }

    std::vector<FactId> inputs;
    if (declared_inputs) {
        inputs = *declared_inputs;
    } else {
        std::unordered_set<FactId> seen;
        for (const auto& rule : rules) {
            for (auto& atom : rule.antecedent.atoms()) {
                if (!consequent_line.contains(atom) && seen.insert(atom).second) {
                    inputs.push_back(atom);
                }
            }
        }
    }

    std::vector<FactId> outputs;
    if (declared_outputs) {
        outputs = *declared_outputs;
    } else {
        std::unordered_set<FactId> read;
        for (const auto& rule : rules) {
            for (auto& atom : rule.antecedent.atoms()) {
                read.insert(atom);
            }
        }
        for (const auto& rule : rules) {
            if (!read.contains(rule.consequent)) {
                outputs.push_back(rule.consequent);
            }
        }
    }

    return RuleNetwork::make(std::move(inputs), std::move(rules), std::move(outputs));
}

std::string to_dsl(const RuleNetwork& network) {
    auto join = [](const std::vector<FactId>& names) {
        std::string out;
        for (std::size_t i = 0; i < names.size(); ++i) {
            out += (i == 0 ? "" : ", ") + names[i];
        }
        return out;
    };
    std::string out;
    if (!network.inputs().empty()) {
        out += "inputs: " + join(network.inputs()) + "\n";
    }
    for (const auto& rule : network.rules()) {
        out += "rule";
        if (!rule.name.empty()) {
            out += " " + rule.name;
        }
        out += ": " + to_string(rule.antecedent) + " -> " + rule.consequent + "\n";
    }
    if (!network.outputs().empty()) {
        out += "outputs: " + join(network.outputs()) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Network construction and ordering

namespace {

// Kahn's algorithm over rules, always releasing the lowest-index ready rule.
// On a cycle, reports one cycle found by walking unresolved dependencies.
std::vector<std::size_t> order_rules(const std::vector<Rule>& rules) {
    std::unordered_map<FactId, std::size_t> rule_of;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        rule_of.emplace(rules[i].consequent, i);
    }
    std::vector<std::vector<std::size_t>> deps(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
        for (const auto& atom : rules[i].antecedent.atoms()) {
            if (auto it = rule_of.find(atom); it != rule_of.end()) {
                deps[i].push_back(it->second);
            }
        }
    }

    std::vector<std::size_t> pending(rules.size());
    std::vector<std::vector<std::size_t>> dependents(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
        pending[i] = deps[i].size();
        for (std::size_t d : deps[i]) {
            dependents[d].push_back(i);
        }
    }
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (pending[i] == 0) {
            ready.insert(i);
        }
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t next = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(next);
        for (std::size_t user : dependents[next]) {
            if (--pending[user] == 0) {
                ready.insert(user);
            }
        }
    }
    if (order.size() == rules.size()) {
        return order;
    }

    // Every unresolved rule has an unresolved dependency; walk until a repeat.
    std::size_t current = 0;
    while (pending[current] == 0) {
        ++current;
    }
    std::vector<std::size_t> path;
    std::vector<int> position(rules.size(), -1);
    while (position[current] < 0) {
        position[current] = static_cast<int>(path.size());
        path.push_back(current);
        for (std::size_t d : deps[current]) {
            if (pending[d] != 0) {
                current = d;
                break;
            }
        }
    }
    // path[k] depends on path[k+1]; report in dependency (producer-first) order.
    std::vector<std::string> cycle;
    for (std::size_t k = path.size(); k-- > static_cast<std::size_t>(position[current]);) {
        cycle.push_back(rules[path[k]].consequent);
    }
    throw CycleError(std::move(cycle));
}

}  // namespace

RuleNetwork RuleNetwork::make(std::vector<FactId> inputs, std::vector<Rule> rules,
                              std::vector<FactId> outputs) {
    std::unordered_set<FactId> input_set;
    for (const auto& fact : inputs) {
        if (!is_valid_fact_name(fact)) {
            throw Error(ErrorCode::InvalidArgument, "invalid fact name '" + fact + "'");
        }
        if (!input_set.insert(fact).second) {
            throw Error(ErrorCode::InvalidArgument, "input '" + fact + "' declared twice");
        }
    }
    std::unordered_set<FactId> consequents;
    for (const auto& rule : rules) {
        if (!is_valid_fact_name(rule.consequent)) {
            throw Error(ErrorCode::InvalidArgument,
                        "invalid fact name '" + rule.consequent + "'");
        }
        if (input_set.contains(rule.consequent)) {
            throw Error(ErrorCode::DuplicateConsequent,
                        "input fact '" + rule.consequent + "' is concluded by a rule");
        }
        if (!consequents.insert(rule.consequent).second) {
            throw Error(ErrorCode::DuplicateConsequent,
                        "duplicate consequent '" + rule.consequent +
                            "'; merge the rules with '|'");
        }
    }
    for (const auto& rule : rules) {
        for (const auto& atom : rule.antecedent.atoms()) {
            if (atom == rule.consequent) {
                throw CycleError({atom});
            }
            if (!input_set.contains(atom) && !consequents.contains(atom)) {
                throw Error(ErrorCode::UnknownAtom,
                            "unknown atom '" + atom + "' in rule for '" + rule.consequent + "'");
            }
        }
    }
    for (const auto& fact : outputs) {
        if (!input_set.contains(fact) && !consequents.contains(fact)) {
            throw Error(ErrorCode::UnknownAtom, "unknown output '" + fact + "'");
        }
    }
    order_rules(rules);

    RuleNetwork network;
    network.inputs_ = std::move(inputs);
    network.rules_ = std::move(rules);
    network.outputs_ = std::move(outputs);
    return network;
}

bool RuleNetwork::is_input(std::string_view fact) const {
    return std::find(inputs_.begin(), inputs_.end(), fact) != inputs_.end();
}

const Rule* RuleNetwork::rule_for(std::string_view fact) const {
    for (const auto& rule : rules_) {
        if (rule.consequent == fact) {
            return &rule;
        }
    }
    return nullptr;
}

std::vector<FactId> topological_order(const RuleNetwork& network) {
    std::vector<FactId> order = network.inputs();
    for (std::size_t index : order_rules(network.rules())) {
        order.push_back(network.rules()[index].consequent);
    }
    return order;
}

// ---------------------------------------------------------------------------
// Evaluation

bool evaluate_expr(const BoolExpr& expr, const Assignment& assignment) {
    switch (expr.kind()) {
        case BoolExpr::Kind::Atom: {
            auto it = assignment.find(expr.name());
            if (it == assignment.end()) {
                throw Error(ErrorCode::UnassignedAtom, "unassigned atom '" + expr.name() + "'");
            }
            return it->second;
        }
        case BoolExpr::Kind::Not:
            return !evaluate_expr(expr.lhs(), assignment);
        case BoolExpr::Kind::And:
            return evaluate_expr(expr.lhs(), assignment) && evaluate_expr(expr.rhs(), assignment);
        case BoolExpr::Kind::Or:
            return evaluate_expr(expr.lhs(), assignment) || evaluate_expr(expr.rhs(), assignment);
        case BoolExpr::Kind::Implies:
            return !evaluate_expr(expr.lhs(), assignment) || evaluate_expr(expr.rhs(), assignment);
    }
    return false;
}

Assignment evaluate_network(const RuleNetwork& network, const Assignment& inputs) {
    Assignment values;
    for (const auto& fact : network.inputs()) {
        auto it = inputs.find(fact);
        if (it == inputs.end()) {
            throw Error(ErrorCode::MissingInput, "missing input bit for '" + fact + "'");
        }
        values.emplace(fact, it->second);
    }
    for (std::size_t index : order_rules(network.rules())) {
        const Rule& rule = network.rules()[index];
        values[rule.consequent] = evaluate_expr(rule.antecedent, values);
    }
    return values;
}

Assignment evaluate_network(const RuleNetwork& network, const std::vector<bool>& inputs) {
    if (inputs.size() != network.inputs().size()) {
        throw Error(ErrorCode::MissingInput,
                    "expected " + std::to_string(network.inputs().size()) + " input bits, got " +
                        std::to_string(inputs.size()));
    }
    Assignment assignment;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        assignment.emplace(network.inputs()[i], inputs[i]);
    }
    return evaluate_network(network, assignment);
}

}  // namespace qrbs
