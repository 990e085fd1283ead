#include "qrbs/categorical.hpp"

#include <algorithm>
#include <set>

#include "qrbs/error.hpp"

namespace qrbs::categorical {

std::uint64_t complex_index(const std::vector<bool>& bits) {
    if (bits.size() > 63) {
        throw Error(ErrorCode::CapExceeded, "complex wider than 63 attributes");
    }
    std::uint64_t index = 0;
    for (bool bit : bits) {
        index = (index << 1) | (bit ? 1U : 0U);
    }
    return index;
}

std::uint64_t Complex::index() const { return complex_index(bits); }

Complex index_to_complex(std::uint64_t index, std::size_t width) {
    if (width > 63 || index >= (std::uint64_t{1} << width)) {
        throw Error(ErrorCode::IndexOutOfRange, "complex index " + std::to_string(index) +
                                                    " out of range for " + std::to_string(width) +
                                                    " attributes");
    }
    Complex complex;
    complex.bits.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
        complex.bits[i] = ((index >> (width - 1 - i)) & 1U) != 0;
    }
    return complex;
}

Complex parse_complex(std::string_view bits) {
    Complex complex;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw Error(ErrorCode::InvalidArgument,
                        "complex must be a string of 0/1, got '" + std::string(bits) + "'");
        }
        complex.bits.push_back(c == '1');
    }
    if (complex.bits.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty complex");
    }
    return complex;
}

std::string to_string(const Association& pair) {
    return "S" + std::to_string(pair.symptoms) + "D" + std::to_string(pair.diagnoses);
}

Assignment LogicBase::assignment(const Association& pair) const {
    Assignment values;
    const std::size_t ns = n_symptoms();
    const std::size_t nd = n_diagnoses();
    for (std::size_t i = 0; i < ns; ++i) {
        values[symptom_names[i]] = ((pair.symptoms >> (ns - 1 - i)) & 1U) != 0;
    }
    for (std::size_t i = 0; i < nd; ++i) {
        values[diagnosis_names[i]] = ((pair.diagnoses >> (nd - 1 - i)) & 1U) != 0;
    }
    return values;
}

std::vector<std::string> default_names(char prefix, std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        names.push_back(std::string(1, prefix) + std::to_string(i));
    }
    return names;
}

LogicBase build_elb(std::size_t n_symptoms, std::size_t n_diagnoses, std::size_t cap) {
    return build_elb(default_names('s', n_symptoms), default_names('d', n_diagnoses), cap);
}

LogicBase build_elb(std::vector<std::string> symptom_names,
                    std::vector<std::string> diagnosis_names, std::size_t cap) {
    const std::size_t ns = symptom_names.size();
    const std::size_t nd = diagnosis_names.size();
    if (ns == 0 || nd == 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "a logic base needs at least one symptom and one diagnosis");
    }
    if (ns + nd > cap || ns + nd > 62) {
        throw Error(ErrorCode::CapExceeded, std::to_string(ns + nd) +
                                                " attributes exceed the cap of " +
                                                std::to_string(std::min<std::size_t>(cap, 62)));
    }
    std::set<std::string> seen;
    for (const auto* names : {&symptom_names, &diagnosis_names}) {
        for (const auto& name : *names) {
            if (!is_valid_fact_name(name) || !seen.insert(name).second) {
                throw Error(ErrorCode::InvalidArgument,
                            "invalid or duplicate attribute name '" + name + "'");
            }
        }
    }

    LogicBase elb{std::move(symptom_names), std::move(diagnosis_names), {}};
    const std::uint64_t n_s = std::uint64_t{1} << ns;
    const std::uint64_t n_d = std::uint64_t{1} << nd;
    elb.pairs.reserve(n_s * n_d);
    for (std::uint64_t d = 0; d < n_d; ++d) {
        for (std::uint64_t s = 0; s < n_s; ++s) {
            elb.pairs.push_back({s, d});
        }
    }
    return elb;
}

ConstraintRule any_symptom_implies_diagnosis(const LogicBase& base) {
    auto fold_or = [](const std::vector<std::string>& names) {
        BoolExpr acc = BoolExpr::atom(names.front());
        for (std::size_t i = 1; i < names.size(); ++i) {
            acc = BoolExpr::disj(std::move(acc), BoolExpr::atom(names[i]));
        }
        return acc;
    };
    return {"any_symptom_implies_diagnosis",
            BoolExpr::implies(fold_or(base.symptom_names), fold_or(base.diagnosis_names))};
}

LogicBase reduce_to_rlb(const LogicBase& elb, const std::vector<ConstraintRule>& constraints) {
    std::set<std::string, std::less<>> declared(elb.symptom_names.begin(),
                                                elb.symptom_names.end());
    declared.insert(elb.diagnosis_names.begin(), elb.diagnosis_names.end());
    for (const auto& constraint : constraints) {
        for (const auto& atom : constraint.expr.atoms()) {
            if (!declared.contains(atom)) {
                throw Error(ErrorCode::UnknownAtom,
                            "unknown atom '" + atom + "' in constraint" +
                                (constraint.name.empty() ? "" : " " + constraint.name));
            }
        }
    }

    LogicBase rlb{elb.symptom_names, elb.diagnosis_names, {}};
    for (const auto& pair : elb.pairs) {
        const Assignment values = elb.assignment(pair);
        const bool admissible = std::all_of(
            constraints.begin(), constraints.end(),
            [&](const ConstraintRule& constraint) { return evaluate_expr(constraint.expr, values); });
        if (admissible) {
            rlb.pairs.push_back(pair);
        }
    }
    return rlb;
}

const char* to_string(Finding finding) noexcept {
    switch (finding) {
        case Finding::Present: return "present";
        case Finding::Absent: return "absent";
        case Finding::Uncertain: return "uncertain";
    }
    return "?";
}

Verdict diagnose(const Complex& symptoms, const LogicBase& rlb) {
    if (symptoms.size() != rlb.n_symptoms()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "symptom complex has " + std::to_string(symptoms.size()) +
                        " attributes, logic base expects " + std::to_string(rlb.n_symptoms()));
    }
    const std::uint64_t observed = symptoms.index();
    Verdict verdict;
    for (const auto& pair : rlb.pairs) {
        if (pair.symptoms == observed) {
            verdict.compatible.push_back(pair.diagnoses);
        }
    }
    std::sort(verdict.compatible.begin(), verdict.compatible.end());
    verdict.compatible.erase(std::unique(verdict.compatible.begin(), verdict.compatible.end()),
                             verdict.compatible.end());
    if (verdict.compatible.empty()) {
        return verdict;
    }

    const std::size_t nd = rlb.n_diagnoses();
    for (std::size_t disease = 0; disease < nd; ++disease) {
        const std::size_t shift = nd - 1 - disease;
        std::size_t with = 0;
        for (std::uint64_t d : verdict.compatible) {
            with += (d >> shift) & 1U;
        }
        if (with == verdict.compatible.size()) {
            verdict.findings.push_back(Finding::Present);
        } else if (with == 0) {
            verdict.findings.push_back(Finding::Absent);
        } else {
            verdict.findings.push_back(Finding::Uncertain);
        }
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Constraint files

namespace {

constexpr std::string_view kAnySymptomShorthand = "any_symptom_implies_diagnosis";

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> parse_name_list(std::string_view text, std::size_t line,
                                         std::size_t column) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item =
            trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        if (!is_valid_fact_name(item)) {
            throw SyntaxError(line, column + start,
                              "expected attribute name but found '" + std::string(item) + "'");
        }
        names.emplace_back(item);
        if (comma == std::string_view::npos) {
            return names;
        }
        start = comma + 1;
    }
}

}  // namespace

ConstraintFile parse_constraints(std::string_view text) {
    ConstraintFile file;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        ++number;
        const std::size_t end = text.find('\n', start);
        std::string_view line =
            text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw SyntaxError(number, line.find_first_not_of(" \t") + 1, "expected ':'");
        }
        const std::string_view head = trim(line.substr(0, colon));
        const std::string_view body = line.substr(colon + 1);

        if (head == "symptoms" || head == "diagnoses") {
            auto& slot = head == "symptoms" ? file.symptom_names : file.diagnosis_names;
            if (slot) {
                throw SyntaxError(number, 1, "duplicate '" + std::string(head) + "' declaration");
            }
            slot = parse_name_list(body, number, colon + 2);
            continue;
        }

        const std::size_t space = head.find_first_of(" \t");
        const std::string_view keyword = head.substr(0, space);
        const std::string_view name =
            space == std::string_view::npos ? std::string_view{} : trim(head.substr(space));
        if (keyword != "rule" && keyword != "constraint") {
            throw SyntaxError(number, line.find_first_not_of(" \t") + 1,
                              "expected 'symptoms', 'diagnoses', 'rule' or 'constraint'");
        }
        if (!name.empty() && !is_valid_fact_name(name)) {
            throw SyntaxError(number, line.find(name) + 1,
                              "invalid rule name '" + std::string(name) + "'");
        }
        if (trim(body) == kAnySymptomShorthand) {
            file.entries.push_back({std::string(name), std::nullopt, number});
            continue;
        }
        BoolExpr expr = parse_expression(body, ParseOptions{.allow_implication = true}, number,
                                         colon + 1);
        file.entries.push_back({std::string(name), std::move(expr), number});
    }
    return file;
}

std::vector<ConstraintRule> ConstraintFile::resolve(const LogicBase& base) const {
    if (symptom_names && *symptom_names != base.symptom_names) {
        throw Error(ErrorCode::DimensionMismatch,
                    "constraint file declares symptoms that differ from the logic base");
    }
    if (diagnosis_names && *diagnosis_names != base.diagnosis_names) {
        throw Error(ErrorCode::DimensionMismatch,
                    "constraint file declares diagnoses that differ from the logic base");
    }
    std::set<std::string, std::less<>> declared(base.symptom_names.begin(),
                                                base.symptom_names.end());
    declared.insert(base.diagnosis_names.begin(), base.diagnosis_names.end());

    std::vector<ConstraintRule> rules;
    for (const auto& entry : entries) {
        if (!entry.expr) {
            ConstraintRule rule = any_symptom_implies_diagnosis(base);
            if (!entry.name.empty()) {
                rule.name = entry.name;
            }
            rules.push_back(std::move(rule));
            continue;
        }
        for (const auto& atom : entry.expr->atoms()) {
            if (!declared.contains(atom)) {
                throw Error(ErrorCode::UnknownAtom, "unknown atom '" + atom + "' at line " +
                                                        std::to_string(entry.line));
            }
        }
        rules.push_back({entry.name, *entry.expr});
    }
    return rules;
}

}  // namespace qrbs::categorical
