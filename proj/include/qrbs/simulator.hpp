#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qrbs/circuit.hpp"

namespace qrbs {

/// Default dense-engine width limit: 2^26 amplitudes of complex<double>, 1 GiB.
inline constexpr std::size_t kDefaultMaxQubits = 26;

/// A single computational basis state; bit k of `value` is qubit k.
struct BasisIndex {
    std::uint64_t value = 0;

    friend bool operator==(BasisIndex, BasisIndex) = default;
};

/**
 * Dense state over 2^n amplitudes with q0 as the least significant bit of
 * the basis index.
 */
class StateVector {
  public:
    using Amplitude = std::complex<double>;

    /// |basis>, rejecting widths above `max_qubits`.
    StateVector(std::size_t num_qubits, BasisIndex basis,
                std::size_t max_qubits = kDefaultMaxQubits);
    /// Takes ownership of explicit amplitudes; size must be a power of two.
    explicit StateVector(std::vector<Amplitude> amplitudes);

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    const std::vector<Amplitude>& amplitudes() const noexcept { return amplitudes_; }
    const Amplitude& operator[](std::size_t index) const { return amplitudes_[index]; }

    /// Applies X, CNOT or CCNOT in place; throws NotUnitary for Measure.
    void apply(const Gate& gate);

    double norm_squared() const;
    /// Probability that `qubit` reads 1.
    double probability_one(QubitId qubit) const;

  private:
    std::size_t num_qubits_;
    std::vector<Amplitude> amplitudes_;
};

StateVector init_state(std::size_t num_qubits, BasisIndex basis,
                       std::size_t max_qubits = kDefaultMaxQubits);

/// Returns a copy of `state` with `gate` applied.
StateVector apply_gate(StateVector state, const Gate& gate);

enum class Engine { Fast, StateVector };

const char* to_string(Engine engine) noexcept;
Engine parse_engine(const std::string& name);

struct RunOptions {
    std::size_t max_qubits = kDefaultMaxQubits;
    /// Dense-engine tolerance for deciding a measurement outcome is deterministic.
    double measurement_tolerance = 1e-9;
};

struct RunResult {
    /// classical_bits[k] is c_k.
    std::vector<bool> classical_bits;
    std::variant<BasisIndex, StateVector> final_state;

    /// c_high ... c_low, the usual printed order.
    std::string bit_string() const;
};

/**
 * Applies the circuit's gates in order from a basis state. A Measure
 * writes the measured qubit's value to its classical bit; the dense engine
 * rejects measuring a qubit whose outcome is not deterministic.
 */
RunResult run(const Circuit& circuit, BasisIndex initial, Engine engine,
              const RunOptions& options = {});

/// True when both results carry the same bits and the dense state is the
/// fast engine's basis state (unit modulus there, zero elsewhere).
bool results_agree(const RunResult& fast, const RunResult& dense, double tolerance = 1e-12);

bool engines_agree(const Circuit& circuit, BasisIndex initial, const RunOptions& options = {});

/// Renders `basis` over `width` qubits, q(width-1) first.
std::string basis_string(BasisIndex basis, std::size_t width);
/// Inverse of `basis_string`; strings shorter than `width` are zero-padded on the left.
BasisIndex parse_basis_string(const std::string& bits, std::size_t width);

}  // namespace qrbs
