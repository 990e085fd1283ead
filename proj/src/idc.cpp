#include "qrbs/idc.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "qrbs/error.hpp"

namespace qrbs::idc {

namespace {

constexpr std::array<const char*, 6> kTNames = {"T0", "T1", "T2", "T3", "T4", "TX"};
constexpr std::array<const char*, 5> kNNames = {"N0", "N1", "N2", "N3", "NY"};
constexpr std::array<const char*, 2> kMNames = {"M0", "M1"};
constexpr std::array<const char*, kStageCount> kStageNames = {
    "I-A", "I-B", "II-A", "II-B", "III-A", "III-B", "III-C", "IV"};

// Stage -> compatible TNM complexes, transcribed row by row from the
// reference staging table.
constexpr std::array<std::pair<Stage, const char*>, kStageCount> kStageTable = {{
    {Stage::IA, "T1 N0 M0"},
    {Stage::IB, "T0 N1 M0 / T1 N1 M0"},
    {Stage::IIA, "T0 N1 M0 / T1 N1 M0 / T2 N0 M0"},
    {Stage::IIB, "T2 N1 M0 / T3 N0 M0"},
    {Stage::IIIA, "T0 N2 M0 / T1 N2 M0 / T2 N0 M0 / T3 N2 M0 / T3 N1 M0"},
    {Stage::IIIB, "T4 N0 M0 / T4 N1 M0 / T4 N2 M0"},
    {Stage::IIIC, "TX N3 M0"},
    {Stage::IV, "TX NY M1"},
}};

constexpr std::string_view kStagingRules =
    R"(# Invasive ductal carcinoma staging: one input fact per relevant TNM complex
# (activated one at a time), one output fact per stage.
inputs: T0N1M0, T0N2M0, T1N0M0, T1N1M0, T1N2M0, T2N0M0, T2N1M0, T3N0M0, T3N1M0, T3N2M0, T4N0M0, T4N1M0, T4N2M0, TXN3M0, TXNYM1

rule: T1N0M0 -> I-A
rule: T0N1M0 | T1N1M0 -> I-B
rule: T0N1M0 | T1N1M0 | T2N0M0 -> II-A
rule: T2N1M0 | T3N0M0 -> II-B
rule: T0N2M0 | T1N2M0 | T2N0M0 | T3N1M0 | T3N2M0 -> III-A
rule: T4N0M0 | T4N1M0 | T4N2M0 -> III-B
rule: TXN3M0 -> III-C
rule: TXNYM1 -> IV

outputs: I-A, I-B, II-A, II-B, III-A, III-B, III-C, IV
)";

template <class Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<const char*, N>& names, std::string_view token) {
    for (std::size_t i = 0; i < N; ++i) {
        if (token == names[i]) {
            return static_cast<Enum>(i);
        }
    }
    return std::nullopt;
}

// Metastatic presentations share one complex, as do N3 M0 presentations.
TnmClass collapse(TnmClass tnm) {
    if (tnm.m == MCategory::M1) {
        return {TCategory::TX, NCategory::NY, MCategory::M1};
    }
    if (tnm.n == NCategory::N3) {
        tnm.t = TCategory::TX;
    }
    return tnm;
}

}  // namespace

bool is_well_formed(const TnmClass& tnm) noexcept {
    const bool metastatic = tnm.m == MCategory::M1;
    if (tnm.t == TCategory::TX && !metastatic && tnm.n != NCategory::N3) {
        return false;
    }
    if (tnm.n == NCategory::NY && !metastatic) {
        return false;
    }
    return true;
}

std::string to_string(const TnmClass& tnm) {
    return std::string(kTNames[static_cast<std::size_t>(tnm.t)]) + " " +
           kNNames[static_cast<std::size_t>(tnm.n)] + " " + kMNames[static_cast<std::size_t>(tnm.m)];
}

std::string fact_name(const TnmClass& tnm) {
    return std::string(kTNames[static_cast<std::size_t>(tnm.t)]) +
           kNNames[static_cast<std::size_t>(tnm.n)] + kMNames[static_cast<std::size_t>(tnm.m)];
}

TnmClass parse_tnm(std::string_view text) {
    std::string compact;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            continue;
        }
        compact += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    auto invalid = [&]() {
        return Error(ErrorCode::InvalidArgument,
                     "invalid TNM classification '" + std::string(text) + "'");
    };
    if (compact.size() != 6) {
        throw invalid();
    }
    const auto t = lookup<TCategory>(kTNames, std::string_view(compact).substr(0, 2));
    const auto n = lookup<NCategory>(kNNames, std::string_view(compact).substr(2, 2));
    const auto m = lookup<MCategory>(kMNames, std::string_view(compact).substr(4, 2));
    if (!t || !n || !m) {
        throw invalid();
    }
    const TnmClass tnm{*t, *n, *m};
    if (!is_well_formed(tnm)) {
        throw Error(ErrorCode::InvalidArgument,
                    "ill-formed TNM classification '" + to_string(tnm) +
                        "': TX requires N3 M0 or M1, NY requires M1");
    }
    return tnm;
}

const char* to_string(Stage stage) noexcept { return kStageNames[static_cast<std::size_t>(stage)]; }

bool StageSet::contains(Stage stage) const noexcept {
    return ((mask_ >> static_cast<unsigned>(stage)) & 1U) != 0;
}

void StageSet::insert(Stage stage) noexcept {
    mask_ = static_cast<std::uint8_t>(mask_ | (1U << static_cast<unsigned>(stage)));
}

std::vector<Stage> StageSet::stages() const {
    std::vector<Stage> out;
    for (std::size_t k = 0; k < kStageCount; ++k) {
        if (contains(static_cast<Stage>(k))) {
            out.push_back(static_cast<Stage>(k));
        }
    }
    return out;
}

std::string StageSet::bit_string() const {
    std::string out(kStageCount, '0');
    for (std::size_t k = 0; k < kStageCount; ++k) {
        if ((mask_ >> k) & 1U) {
            out[kStageCount - 1 - k] = '1';
        }
    }
    return out;
}

std::string to_string(StageSet stages) {
    if (stages.empty()) {
        return "none";
    }
    std::string out;
    for (Stage stage : stages.stages()) {
        out += (out.empty() ? "" : " or ") + std::string(to_string(stage));
    }
    return out;
}

StageSet decode_stages(std::string_view bits) {
    if (bits.size() != kStageCount) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(kStageCount) +
                                                    " output bits, got " +
                                                    std::to_string(bits.size()));
    }
    std::uint8_t mask = 0;
    for (std::size_t i = 0; i < kStageCount; ++i) {
        const char c = bits[i];
        if (c != '0' && c != '1') {
            throw Error(ErrorCode::InvalidArgument,
                        "output bits must be 0/1, got '" + std::string(bits) + "'");
        }
        if (c == '1') {
            mask = static_cast<std::uint8_t>(mask | (1U << (kStageCount - 1 - i)));
        }
    }
    return StageSet(mask);
}

StageSet decode_stages(const std::vector<bool>& classical_bits) {
    if (classical_bits.size() != kStageCount) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(kStageCount) +
                                                    " classical bits, got " +
                                                    std::to_string(classical_bits.size()));
    }
    std::uint8_t mask = 0;
    for (std::size_t k = 0; k < kStageCount; ++k) {
        if (classical_bits[k]) {
            mask = static_cast<std::uint8_t>(mask | (1U << k));
        }
    }
    return StageSet(mask);
}

// ---------------------------------------------------------------------------
// Findings

void validate(const ClinicalFindings& findings) {
    if (findings.tumour_size_mm && !(*findings.tumour_size_mm >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tumour_size_mm must be non-negative");
    }
    if (findings.node_cluster_mm) {
        if (!(*findings.node_cluster_mm >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "node_cluster_mm must be non-negative");
        }
        const bool nodal = findings.axillary_nodes_involved > 0 ||
                           findings.internal_mammary_nodes ||
                           findings.supra_or_infraclavicular_nodes;
        if (!nodal) {
            throw Error(ErrorCode::InvalidArgument,
                        "node_cluster_mm given without any nodal finding");
        }
    }
}

ClinicalFindings findings_from_json(std::string_view json_text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("findings: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::InvalidArgument, "findings must be a JSON object");
    }
    ClinicalFindings findings;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "tumour_size_mm") {
                if (!value.is_null()) {
                    findings.tumour_size_mm = value.get<double>();
                }
            } else if (key == "chest_wall_or_skin_spread") {
                findings.chest_wall_or_skin_spread = value.get<bool>();
            } else if (key == "axillary_nodes_involved") {
                const auto count = value.get<long long>();
                if (count < 0) {
                    throw Error(ErrorCode::InvalidArgument,
                                "axillary_nodes_involved must be non-negative");
                }
                findings.axillary_nodes_involved = static_cast<unsigned>(count);
            } else if (key == "node_cluster_mm") {
                if (!value.is_null()) {
                    findings.node_cluster_mm = value.get<double>();
                }
            } else if (key == "supra_or_infraclavicular_nodes") {
                findings.supra_or_infraclavicular_nodes = value.get<bool>();
            } else if (key == "internal_mammary_nodes") {
                findings.internal_mammary_nodes = value.get<bool>();
            } else if (key == "distant_metastasis") {
                findings.distant_metastasis = value.get<bool>();
            } else {
                throw Error(ErrorCode::InvalidArgument, "unknown findings field '" + key + "'");
            }
        }
    } catch (const json::type_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("findings: ") + e.what());
    }
    validate(findings);
    return findings;
}

TnmClass classify_tnm(const ClinicalFindings& findings) {
    TnmClass tnm;
    const double size = findings.tumour_size_mm.value_or(0.0);
    if (findings.chest_wall_or_skin_spread) {
        tnm.t = TCategory::T4;
    } else if (size <= 0.0) {
        tnm.t = TCategory::T0;
    } else if (size <= 20.0) {
        tnm.t = TCategory::T1;
    } else if (size <= 50.0) {
        tnm.t = TCategory::T2;
    } else {
        tnm.t = TCategory::T3;
    }

    const unsigned axillary = findings.axillary_nodes_involved;
    if (axillary >= 10 || findings.supra_or_infraclavicular_nodes) {
        tnm.n = NCategory::N3;
    } else if (axillary >= 4) {
        tnm.n = NCategory::N2;
    } else if (axillary >= 1 || findings.internal_mammary_nodes) {
        tnm.n = NCategory::N1;
    } else {
        tnm.n = NCategory::N0;
    }

    tnm.m = findings.distant_metastasis ? MCategory::M1 : MCategory::M0;
    return collapse(tnm);
}

// ---------------------------------------------------------------------------
// Maps

const std::array<TnmClass, kInputQubits>& relevant_complexes() {
    using T = TCategory;
    using N = NCategory;
    using M = MCategory;
    static const std::array<TnmClass, kInputQubits> complexes = {{
        {T::T0, N::N1, M::M0},
        {T::T0, N::N2, M::M0},
        {T::T1, N::N0, M::M0},
        {T::T1, N::N1, M::M0},
        {T::T1, N::N2, M::M0},
        {T::T2, N::N0, M::M0},
        {T::T2, N::N1, M::M0},
        {T::T3, N::N0, M::M0},
        {T::T3, N::N1, M::M0},
        {T::T3, N::N2, M::M0},
        {T::T4, N::N0, M::M0},
        {T::T4, N::N1, M::M0},
        {T::T4, N::N2, M::M0},
        {T::TX, N::N3, M::M0},
        {T::TX, N::NY, M::M1},
    }};
    return complexes;
}

QubitId tnm_to_input_qubit(const TnmClass& tnm) {
    const TnmClass key = collapse(tnm);
    const auto& complexes = relevant_complexes();
    const auto it = std::find(complexes.begin(), complexes.end(), key);
    if (it == complexes.end()) {
        throw Error(ErrorCode::NoRelevantComplex,
                    "no relevant complex for " + to_string(tnm) + "; not a stageable presentation");
    }
    return QubitId{static_cast<std::uint32_t>(it - complexes.begin())};
}

StageSet stages_for(const TnmClass& tnm) {
    const TnmClass key = collapse(tnm);
    StageSet stages;
    for (const auto& [stage, row] : kStageTable) {
        std::string_view rest = row;
        while (!rest.empty()) {
            const auto slash = rest.find('/');
            const std::string_view item = rest.substr(0, slash);
            if (parse_tnm(item) == key) {
                stages.insert(stage);
            }
            rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
        }
    }
    return stages;
}

std::string_view staging_rules_source() { return kStagingRules; }

RuleNetwork build_idc_network() { return parse_rules(kStagingRules); }

CompiledCircuit build_idc_circuit(const CompileOptions& options) {
    return compile_network(build_idc_network(), options);
}

// ---------------------------------------------------------------------------
// Staging

StagingResult stage_activation(const CompiledCircuit& circuit, const std::vector<bool>& activation,
                               Engine engine, const RunOptions& options) {
    if (activation.size() != circuit.input_map.size()) {
        throw Error(ErrorCode::OneHotViolation,
                    "activation has " + std::to_string(activation.size()) + " bits, expected " +
                        std::to_string(circuit.input_map.size()));
    }
    const auto active = static_cast<std::size_t>(std::count(activation.begin(), activation.end(), true));
    if (active != 1) {
        throw Error(ErrorCode::OneHotViolation,
                    "one and only one input qubit must be activated, got " + std::to_string(active));
    }
    const std::size_t index =
        static_cast<std::size_t>(std::find(activation.begin(), activation.end(), true) - activation.begin());
    const QubitId qubit = circuit.input_map[index].second;

    Circuit activated(circuit.circuit.num_qubits(), circuit.circuit.num_classical_bits());
    activated.append(Gate::x(qubit));
    for (const auto& gate : circuit.circuit.gates()) {
        activated.append(gate);
    }

    RunResult result = run(activated, BasisIndex{0}, engine, options);
    const StageSet stages = decode_stages(result.classical_bits);
    return {qubit, stages, std::move(result)};
}

StagingResult stage(const CompiledCircuit& circuit, const TnmClass& tnm, Engine engine,
                    const RunOptions& options) {
    std::vector<bool> activation(circuit.input_map.size(), false);
    activation.at(tnm_to_input_qubit(tnm).value) = true;
    return stage_activation(circuit, activation, engine, options);
}

StagingResult stage(const TnmClass& tnm, Engine engine, const RunOptions& options) {
    return stage(build_idc_circuit(), tnm, engine, options);
}

const std::array<ExperimentRow, kInputQubits>& experiment_table() {
    static const std::array<ExperimentRow, kInputQubits> rows = [] {
        constexpr std::array<std::string_view, kInputQubits> bits = {
            "00000110", "00010000", "00000001", "00000110", "00010000",
            "00010100", "00001000", "00001000", "00010000", "00010000",
            "00100000", "00100000", "00100000", "01000000", "10000000"};
        std::array<ExperimentRow, kInputQubits> table{};
        for (std::uint32_t q = 0; q < kInputQubits; ++q) {
            table[q] = {relevant_complexes()[q], q, bits[q]};
        }
        return table;
    }();
    return rows;
}

}  // namespace qrbs::idc
