#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qrbs {

/// Zero-based index with a tag so qubits and classical bits don't mix.
template <class Tag>
struct Index {
    std::uint32_t value = 0;

    constexpr Index() = default;
    constexpr explicit Index(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(Index, Index) = default;
};

using QubitId = Index<struct QubitTag>;
using ClassicalBitId = Index<struct ClassicalBitTag>;

enum class GateKind : std::uint8_t { X, CNOT, CCNOT, Measure };

const char* to_string(GateKind kind) noexcept;

struct Gate {
    GateKind kind = GateKind::X;
    /// Target of X/CNOT/CCNOT; the measured qubit for Measure.
    QubitId target;
    std::array<QubitId, 2> controls{};
    ClassicalBitId cbit;

    static Gate x(QubitId target);
    static Gate cnot(QubitId control, QubitId target);
    static Gate ccnot(QubitId control1, QubitId control2, QubitId target);
    static Gate measure(QubitId qubit, ClassicalBitId cbit);

    std::size_t num_controls() const noexcept;
    bool is_unitary() const noexcept { return kind != GateKind::Measure; }

    friend bool operator==(const Gate& a, const Gate& b);
};

std::string to_string(const Gate& gate);

/**
 * Reversible circuit over X, CNOT, CCNOT and terminal measurements.
 *
 * `append` rejects out-of-range indices, repeated operands, any unitary
 * gate touching an already measured qubit, and a second write to the same
 * classical bit.
 */
class Circuit {
  public:
    Circuit() = default;
    Circuit(std::size_t num_qubits, std::size_t num_classical_bits);

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t num_classical_bits() const noexcept { return num_classical_bits_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    bool empty() const noexcept { return gates_.empty(); }

    Circuit& append(const Gate& gate);

    void set_qubit_label(QubitId qubit, std::string label);
    void set_classical_label(ClassicalBitId bit, std::string label);
    /// Empty string when unlabeled.
    const std::string& qubit_label(QubitId qubit) const;
    const std::string& classical_label(ClassicalBitId bit) const;

    /// Unitary gates in reverse order; throws if the circuit contains measurements.
    Circuit inverse() const;

    /// Same gates and labels over `num_qubits` >= num_qubits() qubits; extra qubits stay idle.
    Circuit widened(std::size_t num_qubits) const;

  private:
    std::size_t num_qubits_ = 0;
    std::size_t num_classical_bits_ = 0;
    std::vector<Gate> gates_;
    std::vector<std::string> qubit_labels_;
    std::vector<std::string> classical_labels_;
    std::vector<bool> measured_;
    std::vector<bool> written_;
};

/// Largest width `as_permutation` will tabulate.
inline constexpr std::size_t kPermutationCap = 16;

/// Image of one basis index under the unitary gates (Measure is skipped).
std::uint64_t permute_basis_state(const Circuit& circuit, std::uint64_t basis);

/// Classical bits written by Measure gates after running from `basis`; bit k is c_k.
std::vector<bool> measure_basis_state(const Circuit& circuit, std::uint64_t basis);

/// Full permutation table; entry i is the image of basis index i.
std::vector<std::uint64_t> as_permutation(const Circuit& circuit,
                                          std::size_t cap = kPermutationCap);

struct GateCounts {
    std::size_t x = 0;
    std::size_t cnot = 0;
    std::size_t ccnot = 0;
    std::size_t measure = 0;
    /// All gates, measurements included.
    std::size_t total = 0;
    std::size_t num_qubits = 0;
    std::size_t num_classical_bits = 0;

    friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

GateCounts gate_counts(const Circuit& circuit);

/// OpenQASM 2.0 subset: x, cx, ccx and measure over registers q and c.
std::string export_qasm(const Circuit& circuit);
Circuit import_qasm(std::string_view text);

}  // namespace qrbs
