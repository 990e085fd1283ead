#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "qrbs/categorical.hpp"
#include "qrbs/error.hpp"
#include "support/generators.hpp"

using namespace qrbs;
using namespace qrbs::categorical;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<std::string> labels(const LogicBase& base) {
    std::set<std::string> out;
    for (const auto& p : base.pairs) {
        out.insert(to_string(p));
    }
    return out;
}

std::vector<ConstraintRule> worked_constraints(const LogicBase& elb) {
    ParseOptions opt;
    opt.allow_implication = true;
    return {
        any_symptom_implies_diagnosis(elb),
        {"R2", parse_expression("d2 => s1", opt)},
        {"R3", parse_expression("d1 & !d2 => s2", opt)},
        {"R4", parse_expression("!d1 & d2 => !s2", opt)},
    };
}

const std::set<std::string> kGoldenRlb{"S0D0", "S1D2", "S2D1", "S2D3", "S3D2", "S3D3"};

}  // namespace

TEST_CASE("complex encoding is most-significant-first") {
    CHECK(complex_index({true, false, false}) == 4);
    CHECK(complex_index({false, false, false}) == 0);
    CHECK(complex_index({false, true, true}) == 3);
    CHECK(index_to_complex(4, 3).bits == std::vector<bool>{true, false, false});
    CHECK(parse_complex("011").index() == 3);
    CHECK_THROWS_AS(index_to_complex(8, 3), Error);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::uint64_t i = 0; i < (1U << n); ++i) {
            CHECK(complex_index(index_to_complex(i, n).bits) == i);
        }
    }
}

TEST_CASE("expanded logic base") {
    CHECK(build_elb(2, 2).pairs.size() == 16);
    CHECK(build_elb(3, 2).pairs.size() == 32);

    const auto small = build_elb(1, 1);
    REQUIRE(small.pairs.size() == 4);
    CHECK(labels(small) == std::set<std::string>{"S0D0", "S0D1", "S1D0", "S1D1"});

    // Ordered by diagnosis index, then symptom index.
    const auto elb = build_elb(2, 2);
    for (std::size_t i = 0; i < elb.pairs.size(); ++i) {
        CHECK(elb.pairs[i].symptoms == i % 4);
        CHECK(elb.pairs[i].diagnoses == i / 4);
    }
    CHECK(elb.symptom_names == std::vector<std::string>{"s1", "s2"});
    CHECK(elb.diagnosis_names == std::vector<std::string>{"d1", "d2"});

    CHECK_THROWS_AS(build_elb(0, 2), Error);
    CHECK_THROWS_AS(build_elb(2, 0), Error);
    try {
        build_elb(12, 9);
        FAIL("expected cap error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CapExceeded);
    }
    CHECK(build_elb(3, 3, 6).pairs.size() == 64);
    CHECK_THROWS_AS(build_elb(3, 4, 6), Error);
}

TEST_CASE("pair assignment binds symptoms and diagnoses by name") {
    const auto elb = build_elb(2, 2);
    // S2 = (s1=1, s2=0), D1 = (d1=0, d2=1)
    const auto a = elb.assignment({2, 1});
    CHECK(a.at("s1"));
    CHECK_FALSE(a.at("s2"));
    CHECK_FALSE(a.at("d1"));
    CHECK(a.at("d2"));
}

TEST_CASE("reduced logic base for the two-symptom example") {
    const auto elb = build_elb(2, 2);
    const auto rlb = reduce_to_rlb(elb, worked_constraints(elb));
    CHECK(labels(rlb) == kGoldenRlb);
    CHECK(rlb.pairs.size() == kGoldenRlb.size());
}

TEST_CASE("reduction edge cases") {
    const auto elb = build_elb(2, 2);
    CHECK(reduce_to_rlb(elb, {}).pairs == elb.pairs);
    const auto contradiction = parse_expression("s1 & !s1");
    CHECK(reduce_to_rlb(elb, {{"F", contradiction}}).pairs.empty());
    try {
        reduce_to_rlb(elb, {{"bad", parse_expression("s9")}});
        FAIL("expected unknown atom");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownAtom);
    }
}

TEST_CASE("worked diagnoses") {
    const auto elb = build_elb(2, 2);
    const auto rlb = reduce_to_rlb(elb, worked_constraints(elb));

    auto v = diagnose(parse_complex("01"), rlb);
    CHECK(v.compatible == std::vector<std::uint64_t>{2});
    CHECK(v.findings == std::vector<Finding>{Finding::Present, Finding::Absent});

    v = diagnose(parse_complex("10"), rlb);
    CHECK(v.compatible == std::vector<std::uint64_t>{1, 3});
    CHECK(v.findings == std::vector<Finding>{Finding::Uncertain, Finding::Present});

    v = diagnose(parse_complex("00"), rlb);
    CHECK(v.compatible == std::vector<std::uint64_t>{0});
    CHECK(v.findings == std::vector<Finding>{Finding::Absent, Finding::Absent});

    CHECK_THROWS_AS(diagnose(parse_complex("011"), rlb), Error);
}

TEST_CASE("symptoms absent from the knowledge base are reported as inconsistent") {
    const auto elb = build_elb(2, 2);
    const auto rlb = reduce_to_rlb(elb, {{"only-healthy", parse_expression("!s1 & !s2")}});
    const auto v = diagnose(parse_complex("11"), rlb);
    CHECK_FALSE(v.consistent());
    CHECK(v.findings.empty());
}

TEST_CASE("constraint file") {
    const auto file = parse_constraints(read_file(QRBS_DATA_DIR "/ledley_lusted.constraints"));
    REQUIRE(file.symptom_names.has_value());
    CHECK(*file.symptom_names == std::vector<std::string>{"s1", "s2"});
    CHECK(*file.diagnosis_names == std::vector<std::string>{"d1", "d2"});
    REQUIRE(file.entries.size() == 4);
    CHECK_FALSE(file.entries[0].expr.has_value());
    CHECK(file.entries[1].name == "R2");

    const auto elb = build_elb(2, 2);
    CHECK(labels(reduce_to_rlb(elb, file.resolve(elb))) == kGoldenRlb);

    CHECK_THROWS_AS(file.resolve(build_elb(3, 2)), Error);
    CHECK_THROWS_AS(parse_constraints("rule: s1 & -> d1"), SyntaxError);
    const auto unknown = parse_constraints("rule: q7 => d1");
    CHECK_THROWS_AS(unknown.resolve(elb), Error);
}

TEST_CASE("property: reduction is sound and complete") {
    std::mt19937_64 rng(0xca7e01);
    for (std::size_t ns = 1; ns <= 6; ++ns) {
        for (std::size_t nd = 1; ns + nd <= 12 && nd <= 6; ++nd) {
            const auto elb = build_elb(ns, nd);
            std::vector<FactId> names = elb.symptom_names;
            names.insert(names.end(), elb.diagnosis_names.begin(), elb.diagnosis_names.end());

            std::vector<ConstraintRule> constraints;
            const int count = std::uniform_int_distribution<int>(1, 4)(rng);
            for (int c = 0; c < count; ++c) {
                auto e = BoolExpr::implies(testing::random_expr(rng, names, 2),
                                           testing::random_expr(rng, names, 2));
                constraints.push_back({"c" + std::to_string(c), e});
            }
            const auto rlb = reduce_to_rlb(elb, constraints);
            std::set<std::pair<std::uint64_t, std::uint64_t>> kept;
            for (const auto& p : rlb.pairs) {
                kept.insert({p.symptoms, p.diagnoses});
            }
            REQUIRE(kept.size() == rlb.pairs.size());

            for (const auto& p : elb.pairs) {
                std::uint64_t bits = 0;
                for (std::size_t i = 0; i < ns; ++i) {
                    bits |= ((p.symptoms >> (ns - 1 - i)) & 1U) << i;
                }
                for (std::size_t j = 0; j < nd; ++j) {
                    bits |= ((p.diagnoses >> (nd - 1 - j)) & 1U) << (ns + j);
                }
                const bool ok = std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) {
                    return testing::truth(c.expr, names, bits);
                });
                REQUIRE(ok == (kept.count({p.symptoms, p.diagnoses}) == 1));
            }
        }
    }
}

TEST_CASE("property: adding a constraint never enlarges the reduced base") {
    std::mt19937_64 rng(0xca7e02);
    for (int trial = 0; trial < 50; ++trial) {
        const auto elb = build_elb(3, 3);
        std::vector<FactId> names = elb.symptom_names;
        names.insert(names.end(), elb.diagnosis_names.begin(), elb.diagnosis_names.end());
        std::vector<ConstraintRule> constraints;
        std::size_t previous = elb.pairs.size();
        for (int c = 0; c < 5; ++c) {
            constraints.push_back({"c", testing::random_expr(rng, names, 3)});
            const auto rlb = reduce_to_rlb(elb, constraints);
            REQUIRE(rlb.pairs.size() <= previous);
            previous = rlb.pairs.size();
        }
    }
}

TEST_CASE("property: verdict trichotomy") {
    // Without constraints every disease is undecided for every symptom complex.
    for (std::size_t nd = 1; nd <= 3; ++nd) {
        const auto elb = build_elb(2, nd);
        for (std::uint64_t s = 0; s < 4; ++s) {
            const auto v = diagnose(index_to_complex(s, 2), elb);
            CHECK(v.findings == std::vector<Finding>(nd, Finding::Uncertain));
        }
    }

    std::mt19937_64 rng(0xca7e03);
    for (int trial = 0; trial < 100; ++trial) {
        const auto elb = build_elb(3, 3);
        std::vector<FactId> names = elb.symptom_names;
        names.insert(names.end(), elb.diagnosis_names.begin(), elb.diagnosis_names.end());
        const auto rlb = reduce_to_rlb(elb, {{"c", testing::random_expr(rng, names, 3)}});
        for (std::uint64_t s = 0; s < 8; ++s) {
            const auto v = diagnose(index_to_complex(s, 3), rlb);
            if (!v.consistent()) {
                CHECK(v.findings.empty());
                continue;
            }
            REQUIRE(v.findings.size() == 3);
            for (std::size_t d = 0; d < 3; ++d) {
                std::size_t ones = 0;
                for (auto D : v.compatible) {
                    ones += (D >> (2 - d)) & 1U;
                }
                const Finding expected = ones == v.compatible.size() ? Finding::Present
                                         : ones == 0                 ? Finding::Absent
                                                                     : Finding::Uncertain;
                CHECK(v.findings[d] == expected);
            }
        }
    }
}
