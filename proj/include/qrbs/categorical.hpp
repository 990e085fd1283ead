#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrbs/rule_model.hpp"

namespace qrbs::categorical {

/// Largest n_symptoms + n_diagnoses accepted by default.
inline constexpr std::size_t kDefaultAttributeCap = 20;

/**
 * A full truth assignment over one attribute family (all symptoms, or all
 * diagnoses). bits[0] is attribute 1 and is the most significant bit of
 * the index, so (s1=1, s2=0, s3=0) is complex 4.
 */
struct Complex {
    std::vector<bool> bits;

    std::size_t size() const noexcept { return bits.size(); }
    std::uint64_t index() const;

    friend bool operator==(const Complex&, const Complex&) = default;
};

std::uint64_t complex_index(const std::vector<bool>& bits);
Complex index_to_complex(std::uint64_t index, std::size_t width);

/// Parses an MSB-first bit string such as "01" (s1=0, s2=1).
Complex parse_complex(std::string_view bits);

struct Association {
    std::uint64_t symptoms;
    std::uint64_t diagnoses;

    friend bool operator==(const Association&, const Association&) = default;
};

/// "S1D2" style label.
std::string to_string(const Association& pair);

struct LogicBase {
    std::vector<std::string> symptom_names;
    std::vector<std::string> diagnosis_names;
    /// Ordered by (diagnosis index, symptom index).
    std::vector<Association> pairs;

    std::size_t n_symptoms() const noexcept { return symptom_names.size(); }
    std::size_t n_diagnoses() const noexcept { return diagnosis_names.size(); }

    /// Joint truth assignment of a pair over all symptom and diagnosis names.
    Assignment assignment(const Association& pair) const;
};

/// s1..sn and d1..dm.
std::vector<std::string> default_names(char prefix, std::size_t count);

LogicBase build_elb(std::size_t n_symptoms, std::size_t n_diagnoses,
                    std::size_t cap = kDefaultAttributeCap);
LogicBase build_elb(std::vector<std::string> symptom_names,
                    std::vector<std::string> diagnosis_names,
                    std::size_t cap = kDefaultAttributeCap);

struct ConstraintRule {
    std::string name;
    BoolExpr expr;
};

/// (s1 | ... | sn) => (d1 | ... | dm): symptoms imply at least one diagnosis.
ConstraintRule any_symptom_implies_diagnosis(const LogicBase& base);

/// Keeps the pairs whose joint assignment satisfies every constraint.
LogicBase reduce_to_rlb(const LogicBase& elb, const std::vector<ConstraintRule>& constraints);

enum class Finding { Present, Absent, Uncertain };

const char* to_string(Finding finding) noexcept;

struct Verdict {
    /// Diagnosis complex indices paired with the observed symptoms, ascending.
    std::vector<std::uint64_t> compatible;
    /// One entry per disease, in declaration order. Empty when inconsistent.
    std::vector<Finding> findings;

    /// False when the observed symptom complex has no pair in the logic base.
    bool consistent() const noexcept { return !compatible.empty(); }
};

Verdict diagnose(const Complex& symptoms, const LogicBase& rlb);

/**
 * Parsed constraint file:
 *
 *     symptoms: s1, s2
 *     diagnoses: d1, d2
 *     rule R1: any_symptom_implies_diagnosis
 *     rule R2: d2 => s1
 *
 * `constraint` is accepted as a synonym for `rule`.
 */
struct ConstraintFile {
    struct Entry {
        std::string name;
        std::optional<BoolExpr> expr;  // nullopt: the any-symptom shorthand
        std::size_t line;
    };

    std::optional<std::vector<std::string>> symptom_names;
    std::optional<std::vector<std::string>> diagnosis_names;
    std::vector<Entry> entries;

    /// Expands shorthands against `base` and checks every atom is declared.
    std::vector<ConstraintRule> resolve(const LogicBase& base) const;
};

ConstraintFile parse_constraints(std::string_view text);

}  // namespace qrbs::categorical
