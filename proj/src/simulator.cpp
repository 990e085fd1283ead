#include "qrbs/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "qrbs/error.hpp"

namespace qrbs {

StateVector::StateVector(std::size_t num_qubits, BasisIndex basis, std::size_t max_qubits)
    : num_qubits_(num_qubits) {
    if (num_qubits > max_qubits || num_qubits > 40) {
        throw Error(ErrorCode::CapExceeded,
                    std::to_string(num_qubits) + " qubits exceed the statevector cap of " +
                        std::to_string(std::min<std::size_t>(max_qubits, 40)));
    }
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    if (basis.value >= dim) {
        throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(basis.value) +
                                                    " out of range for " +
                                                    std::to_string(num_qubits) + " qubits");
    }
    amplitudes_.assign(dim, Amplitude{0.0, 0.0});
    amplitudes_[basis.value] = Amplitude{1.0, 0.0};
}

StateVector::StateVector(std::vector<Amplitude> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty() || !std::has_single_bit(amplitudes_.size())) {
        throw Error(ErrorCode::InvalidArgument, "amplitude count must be a power of two");
    }
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(amplitudes_.size()));
}

void StateVector::apply(const Gate& gate) {
    if (!gate.is_unitary()) {
        throw Error(ErrorCode::NotUnitary, "measure passed to apply_gate");
    }
    const std::size_t nc = gate.num_controls();
    std::array<std::uint32_t, 3> involved{gate.target.value, 0, 0};
    std::uint64_t control_mask = 0;
    for (std::size_t i = 0; i < nc; ++i) {
        involved[i + 1] = gate.controls[i].value;
        control_mask |= std::uint64_t{1} << gate.controls[i].value;
    }
    const std::size_t k = nc + 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (involved[i] >= num_qubits_) {
            throw Error(ErrorCode::IndexOutOfRange, to_string(gate) + " out of range for " +
                                                        std::to_string(num_qubits_) + " qubits");
        }
    }
    std::sort(involved.begin(), involved.begin() + static_cast<std::ptrdiff_t>(k));
    const std::uint64_t target_mask = std::uint64_t{1} << gate.target.value;

    // Enumerate the 2^(n-k) indices with zeros at every involved position,
    // then set the controls; each such index pairs with its target flip.
    const std::uint64_t count = std::uint64_t{1} << (num_qubits_ - k);
    for (std::uint64_t c = 0; c < count; ++c) {
        std::uint64_t base = c;
        for (std::size_t i = 0; i < k; ++i) {
            const std::uint64_t low = base & ((std::uint64_t{1} << involved[i]) - 1);
            base = ((base >> involved[i]) << (involved[i] + 1)) | low;
        }
        const std::uint64_t index0 = base | control_mask;
        std::swap(amplitudes_[index0], amplitudes_[index0 | target_mask]);
    }
}

double StateVector::norm_squared() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) {
        sum += std::norm(a);
    }
    return sum;
}

double StateVector::probability_one(QubitId qubit) const {
    if (qubit.value >= num_qubits_) {
        throw Error(ErrorCode::IndexOutOfRange, "qubit out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << qubit.value;
    double sum = 0.0;
    for (std::uint64_t block = bit; block < amplitudes_.size(); block += 2 * bit) {
        for (std::uint64_t i = block; i < block + bit; ++i) {
            sum += std::norm(amplitudes_[i]);
        }
    }
    return sum;
}

StateVector init_state(std::size_t num_qubits, BasisIndex basis, std::size_t max_qubits) {
    return StateVector(num_qubits, basis, max_qubits);
}

StateVector apply_gate(StateVector state, const Gate& gate) {
    state.apply(gate);
    return state;
}

const char* to_string(Engine engine) noexcept {
    return engine == Engine::Fast ? "fast" : "statevector";
}

Engine parse_engine(const std::string& name) {
    if (name == "fast") {
        return Engine::Fast;
    }
    if (name == "statevector") {
        return Engine::StateVector;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown engine '" + name + "'");
}

std::string RunResult::bit_string() const {
    std::string out;
    out.reserve(classical_bits.size());
    for (auto it = classical_bits.rbegin(); it != classical_bits.rend(); ++it) {
        out += *it ? '1' : '0';
    }
    return out;
}

namespace {

RunResult run_fast(const Circuit& circuit, BasisIndex initial) {
    if (circuit.num_qubits() > 64) {
        throw Error(ErrorCode::CapExceeded, "fast engine limited to 64 qubits");
    }
    if (circuit.num_qubits() < 64 && initial.value >= (std::uint64_t{1} << circuit.num_qubits())) {
        throw Error(ErrorCode::IndexOutOfRange, "initial basis index out of range");
    }
    std::uint64_t state = initial.value;
    std::vector<bool> bits(circuit.num_classical_bits(), false);
    for (const auto& gate : circuit.gates()) {
        const std::uint64_t target = std::uint64_t{1} << gate.target.value;
        switch (gate.kind) {
            case GateKind::X:
                state ^= target;
                break;
            case GateKind::CNOT:
                if ((state >> gate.controls[0].value) & 1U) {
                    state ^= target;
                }
                break;
            case GateKind::CCNOT: {
                const std::uint64_t both = (std::uint64_t{1} << gate.controls[0].value) |
                                           (std::uint64_t{1} << gate.controls[1].value);
                if ((state & both) == both) {
                    state ^= target;
                }
                break;
            }
            case GateKind::Measure:
                bits[gate.cbit.value] = (state & target) != 0;
                break;
        }
    }
    return {std::move(bits), BasisIndex{state}};
}

RunResult run_dense(const Circuit& circuit, BasisIndex initial, const RunOptions& options) {
    StateVector state(circuit.num_qubits(), initial, options.max_qubits);
    std::vector<bool> bits(circuit.num_classical_bits(), false);
    for (const auto& gate : circuit.gates()) {
        if (gate.is_unitary()) {
            state.apply(gate);
            continue;
        }
        const double p1 = state.probability_one(gate.target);
        if (p1 >= 1.0 - options.measurement_tolerance) {
            bits[gate.cbit.value] = true;
        } else if (p1 > options.measurement_tolerance) {
            throw Error(ErrorCode::SuperposedMeasurement,
                        "qubit " + std::to_string(gate.target.value) +
                            " is not in a basis state (P(1) = " + std::to_string(p1) + ")");
        }
    }
    return {std::move(bits), std::move(state)};
}

}  // namespace

RunResult run(const Circuit& circuit, BasisIndex initial, Engine engine, const RunOptions& options) {
    return engine == Engine::Fast ? run_fast(circuit, initial)
                                  : run_dense(circuit, initial, options);
}

bool results_agree(const RunResult& fast, const RunResult& dense, double tolerance) {
    if (fast.classical_bits != dense.classical_bits) {
        return false;
    }
    const auto* basis = std::get_if<BasisIndex>(&fast.final_state);
    const auto* state = std::get_if<StateVector>(&dense.final_state);
    if (basis == nullptr || state == nullptr || basis->value >= state->dimension()) {
        return false;
    }
    for (std::uint64_t i = 0; i < state->dimension(); ++i) {
        const double magnitude = std::abs((*state)[i]);
        const double expected = i == basis->value ? 1.0 : 0.0;
        if (std::abs(magnitude - expected) > tolerance) {
            return false;
        }
    }
    return true;
}

bool engines_agree(const Circuit& circuit, BasisIndex initial, const RunOptions& options) {
    return results_agree(run(circuit, initial, Engine::Fast),
                         run(circuit, initial, Engine::StateVector, options));
}

std::string basis_string(BasisIndex basis, std::size_t width) {
    std::string out(width, '0');
    for (std::size_t q = 0; q < width; ++q) {
        if ((basis.value >> q) & 1U) {
            out[width - 1 - q] = '1';
        }
    }
    return out;
}

BasisIndex parse_basis_string(const std::string& bits, std::size_t width) {
    if (bits.empty() || bits.size() > width || bits.size() > 64) {
        throw Error(ErrorCode::InvalidArgument, "input bit string of length " +
                                                    std::to_string(bits.size()) +
                                                    " does not fit " + std::to_string(width) +
                                                    " qubits");
    }
    std::uint64_t value = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw Error(ErrorCode::InvalidArgument, "input must be a string of 0/1, got '" + bits + "'");
        }
        value = (value << 1) | (c == '1' ? 1U : 0U);
    }
    return BasisIndex{value};
}

}  // namespace qrbs
