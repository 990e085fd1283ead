#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrbs/circuit.hpp"
#include "qrbs/compiler.hpp"
#include "qrbs/rule_model.hpp"
#include "qrbs/simulator.hpp"

// Breast invasive ductal carcinoma staging on top of the rule compiler.
// This is a reconstruction of a published teaching model, not a clinical tool.
namespace qrbs::idc {

enum class TCategory : std::uint8_t { T0, T1, T2, T3, T4, TX };
enum class NCategory : std::uint8_t { N0, N1, N2, N3, NY };
enum class MCategory : std::uint8_t { M0, M1 };

struct TnmClass {
    TCategory t = TCategory::T0;
    NCategory n = NCategory::N0;
    MCategory m = MCategory::M0;

    friend bool operator==(const TnmClass&, const TnmClass&) = default;
};

/// TX appears only with N3 M0 or with M1; NY only with M1.
bool is_well_formed(const TnmClass& tnm) noexcept;

/// "T2 N1 M0".
std::string to_string(const TnmClass& tnm);
/// Compact fact name, "T2N1M0".
std::string fact_name(const TnmClass& tnm);

/// Accepts "T2,N1,M0", "T2 N1 M0" or "T2N1M0"; throws InvalidArgument
/// on unknown tokens or ill-formed combinations.
TnmClass parse_tnm(std::string_view text);

enum class Stage : std::uint8_t { IA, IB, IIA, IIB, IIIA, IIIB, IIIC, IV };

inline constexpr std::size_t kStageCount = 8;
inline constexpr std::size_t kInputQubits = 15;
inline constexpr std::size_t kAncillaBudget = 10;

/// "I-A", "III-C", ...
const char* to_string(Stage stage) noexcept;

/// Bit k set means stage k (c0 = I-A ... c7 = IV).
class StageSet {
  public:
    constexpr StageSet() = default;
    constexpr explicit StageSet(std::uint8_t mask) : mask_(mask) {}

    std::uint8_t mask() const noexcept { return mask_; }
    bool empty() const noexcept { return mask_ == 0; }
    bool contains(Stage stage) const noexcept;
    void insert(Stage stage) noexcept;
    std::vector<Stage> stages() const;

    /// c7 ... c0.
    std::string bit_string() const;

    friend bool operator==(StageSet, StageSet) = default;

  private:
    std::uint8_t mask_ = 0;
};

/// "I-B or II-A"; stages in ascending order. "none" when empty.
std::string to_string(StageSet stages);

/// Decodes an 8-character c7..c0 string.
StageSet decode_stages(std::string_view bits);
StageSet decode_stages(const std::vector<bool>& classical_bits);

/// Patient findings from the clinical examination.
struct ClinicalFindings {
    std::optional<double> tumour_size_mm;
    bool chest_wall_or_skin_spread = false;
    unsigned axillary_nodes_involved = 0;
    std::optional<double> node_cluster_mm;
    bool supra_or_infraclavicular_nodes = false;
    bool internal_mammary_nodes = false;
    bool distant_metastasis = false;
};

/// Throws InvalidArgument on negative sizes or a node cluster without any
/// nodal finding.
void validate(const ClinicalFindings& findings);

ClinicalFindings findings_from_json(std::string_view json_text);

/**
 * T: none or 0 mm -> T0, up to 20 mm -> T1, up to 50 mm -> T2, larger -> T3,
 * chest wall or skin spread -> T4.
 * N: 10+ axillary or supra/infraclavicular -> N3, 4-9 -> N2, 1-3 axillary or
 * internal mammary -> N1, else N0.
 * Metastatic cases collapse to TX NY M1 and N3 M0 cases to TX N3 M0.
 */
TnmClass classify_tnm(const ClinicalFindings& findings);

/// The 15 relevant complexes, index = input qubit.
const std::array<TnmClass, kInputQubits>& relevant_complexes();

/// Throws NoRelevantComplex for complexes outside the staging vocabulary.
QubitId tnm_to_input_qubit(const TnmClass& tnm);

/// Stages whose reference table row lists `tnm` (classical lookup).
StageSet stages_for(const TnmClass& tnm);

/// DSL source of the staging rules.
std::string_view staging_rules_source();

RuleNetwork build_idc_network();
CompiledCircuit build_idc_circuit(const CompileOptions& options = {});

struct StagingResult {
    QubitId activated;
    StageSet stages;
    RunResult run;
};

/**
 * Stages a one-hot activation vector of `kInputQubits` bits: X on the
 * active input, then the compiled circuit. Throws OneHotViolation unless
 * exactly one bit is set; the check happens before any simulation.
 */
StagingResult stage_activation(const CompiledCircuit& circuit, const std::vector<bool>& activation,
                               Engine engine, const RunOptions& options = {});

StagingResult stage(const CompiledCircuit& circuit, const TnmClass& tnm, Engine engine,
                    const RunOptions& options = {});
StagingResult stage(const TnmClass& tnm, Engine engine, const RunOptions& options = {});

/// One row of the published experiment: complex, activated qubit, output bits.
struct ExperimentRow {
    TnmClass tnm;
    std::uint32_t qubit;
    std::string_view output_bits;
};

const std::array<ExperimentRow, kInputQubits>& experiment_table();

}  // namespace qrbs::idc
