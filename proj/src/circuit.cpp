#include "qrbs/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "qrbs/error.hpp"

namespace qrbs {

const char* to_string(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::X: return "x";
        case GateKind::CNOT: return "cx";
        case GateKind::CCNOT: return "ccx";
        case GateKind::Measure: return "measure";
    }
    return "?";
}

Gate Gate::x(QubitId target) {
    Gate gate;
    gate.kind = GateKind::X;
    gate.target = target;
    return gate;
}

Gate Gate::cnot(QubitId control, QubitId target) {
    Gate gate;
    gate.kind = GateKind::CNOT;
    gate.target = target;
    gate.controls[0] = control;
    return gate;
}

Gate Gate::ccnot(QubitId control1, QubitId control2, QubitId target) {
    Gate gate;
    gate.kind = GateKind::CCNOT;
    gate.target = target;
    gate.controls = {control1, control2};
    return gate;
}

Gate Gate::measure(QubitId qubit, ClassicalBitId cbit) {
    Gate gate;
    gate.kind = GateKind::Measure;
    gate.target = qubit;
    gate.cbit = cbit;
    return gate;
}

std::size_t Gate::num_controls() const noexcept {
    switch (kind) {
        case GateKind::CNOT: return 1;
        case GateKind::CCNOT: return 2;
        default: return 0;
    }
}

bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.target != b.target) {
        return false;
    }
    switch (a.kind) {
        case GateKind::X: return true;
        case GateKind::CNOT: return a.controls[0] == b.controls[0];
        case GateKind::CCNOT: return a.controls == b.controls;
        case GateKind::Measure: return a.cbit == b.cbit;
    }
    return false;
}

std::string to_string(const Gate& gate) {
    auto q = [](QubitId id) { return "q[" + std::to_string(id.value) + "]"; };
    switch (gate.kind) {
        case GateKind::X: return "x " + q(gate.target);
        case GateKind::CNOT: return "cx " + q(gate.controls[0]) + "," + q(gate.target);
        case GateKind::CCNOT:
            return "ccx " + q(gate.controls[0]) + "," + q(gate.controls[1]) + "," + q(gate.target);
        case GateKind::Measure:
            return "measure " + q(gate.target) + " -> c[" + std::to_string(gate.cbit.value) + "]";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Circuit::Circuit(std::size_t num_qubits, std::size_t num_classical_bits)
    : num_qubits_(num_qubits),
      num_classical_bits_(num_classical_bits),
      qubit_labels_(num_qubits),
      classical_labels_(num_classical_bits),
      measured_(num_qubits, false),
      written_(num_classical_bits, false) {}

Circuit& Circuit::append(const Gate& gate) {
    auto check_qubit = [&](QubitId q) {
        if (q.value >= num_qubits_) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "qubit " + std::to_string(q.value) + " out of range for a " +
                            std::to_string(num_qubits_) + "-qubit circuit");
        }
    };
    check_qubit(gate.target);
    const std::size_t nc = gate.num_controls();
    for (std::size_t i = 0; i < nc; ++i) {
        check_qubit(gate.controls[i]);
        if (gate.controls[i] == gate.target) {
            throw Error(ErrorCode::ControlEqualsTarget, "control equals target in " + to_string(gate));
        }
    }
    if (nc == 2 && gate.controls[0] == gate.controls[1]) {
        throw Error(ErrorCode::ControlEqualsTarget, "repeated control in " + to_string(gate));
    }

    if (gate.kind == GateKind::Measure) {
        if (gate.cbit.value >= num_classical_bits_) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "classical bit " + std::to_string(gate.cbit.value) + " out of range for " +
                            std::to_string(num_classical_bits_) + " classical bits");
        }
        if (written_[gate.cbit.value]) {
            throw Error(ErrorCode::ClassicalBitReused,
                        "classical bit " + std::to_string(gate.cbit.value) + " already written");
        }
        written_[gate.cbit.value] = true;
        measured_[gate.target.value] = true;
    } else {
        if (measured_[gate.target.value]) {
            throw Error(ErrorCode::WriteAfterMeasure, to_string(gate) + " after measurement");
        }
        for (std::size_t i = 0; i < nc; ++i) {
            if (measured_[gate.controls[i].value]) {
                throw Error(ErrorCode::WriteAfterMeasure, to_string(gate) + " after measurement");
            }
        }
    }
    gates_.push_back(gate);
    return *this;
}

void Circuit::set_qubit_label(QubitId qubit, std::string label) {
    if (qubit.value >= num_qubits_) {
        throw Error(ErrorCode::IndexOutOfRange, "label for qubit out of range");
    }
    qubit_labels_[qubit.value] = std::move(label);
}

void Circuit::set_classical_label(ClassicalBitId bit, std::string label) {
    if (bit.value >= num_classical_bits_) {
        throw Error(ErrorCode::IndexOutOfRange, "label for classical bit out of range");
    }
    classical_labels_[bit.value] = std::move(label);
}

const std::string& Circuit::qubit_label(QubitId qubit) const {
    return qubit_labels_.at(qubit.value);
}

const std::string& Circuit::classical_label(ClassicalBitId bit) const {
    return classical_labels_.at(bit.value);
}

Circuit Circuit::inverse() const {
    Circuit inv(num_qubits_, num_classical_bits_);
    inv.qubit_labels_ = qubit_labels_;
    inv.classical_labels_ = classical_labels_;
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        if (!it->is_unitary()) {
            throw Error(ErrorCode::NotUnitary, "cannot invert a circuit with measurements");
        }
        inv.append(*it);
    }
    return inv;
}

Circuit Circuit::widened(std::size_t num_qubits) const {
    if (num_qubits < num_qubits_) {
        throw Error(ErrorCode::InvalidArgument, "cannot narrow a circuit");
    }
    Circuit wide(num_qubits, num_classical_bits_);
    for (const auto& gate : gates_) {
        wide.append(gate);
    }
    std::copy(qubit_labels_.begin(), qubit_labels_.end(), wide.qubit_labels_.begin());
    wide.classical_labels_ = classical_labels_;
    return wide;
}

// ---------------------------------------------------------------------------
// Basis-state semantics

namespace {

bool bit_of(std::uint64_t basis, QubitId q) { return ((basis >> q.value) & 1U) != 0; }

std::uint64_t step(const Gate& gate, std::uint64_t basis) {
    bool fire = true;
    switch (gate.kind) {
        case GateKind::Measure: return basis;
        case GateKind::X: break;
        case GateKind::CNOT: fire = bit_of(basis, gate.controls[0]); break;
        case GateKind::CCNOT:
            fire = bit_of(basis, gate.controls[0]) && bit_of(basis, gate.controls[1]);
            break;
    }
    return fire ? basis ^ (std::uint64_t{1} << gate.target.value) : basis;
}

}  // namespace

std::uint64_t permute_basis_state(const Circuit& circuit, std::uint64_t basis) {
    for (const auto& gate : circuit.gates()) {
        basis = step(gate, basis);
    }
    return basis;
}

std::vector<bool> measure_basis_state(const Circuit& circuit, std::uint64_t basis) {
    std::vector<bool> bits(circuit.num_classical_bits(), false);
    for (const auto& gate : circuit.gates()) {
        if (gate.kind == GateKind::Measure) {
            bits[gate.cbit.value] = bit_of(basis, gate.target);
        } else {
            basis = step(gate, basis);
        }
    }
    return bits;
}

std::vector<std::uint64_t> as_permutation(const Circuit& circuit, std::size_t cap) {
    if (circuit.num_qubits() > cap) {
        throw Error(ErrorCode::CapExceeded, "permutation oracle limited to " + std::to_string(cap) +
                                                " qubits, circuit has " +
                                                std::to_string(circuit.num_qubits()));
    }
    const std::uint64_t dim = std::uint64_t{1} << circuit.num_qubits();
    std::vector<std::uint64_t> image(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
        image[i] = i;
    }
    // Gate-major: each gate is applied to the whole table before the next.
    for (const auto& gate : circuit.gates()) {
        for (auto& value : image) {
            value = step(gate, value);
        }
    }
    return image;
}

GateCounts gate_counts(const Circuit& circuit) {
    GateCounts counts;
    counts.num_qubits = circuit.num_qubits();
    counts.num_classical_bits = circuit.num_classical_bits();
    for (const auto& gate : circuit.gates()) {
        switch (gate.kind) {
            case GateKind::X: ++counts.x; break;
            case GateKind::CNOT: ++counts.cnot; break;
            case GateKind::CCNOT: ++counts.ccnot; break;
            case GateKind::Measure: ++counts.measure; break;
        }
    }
    counts.total = circuit.gates().size();
    return counts;
}

// ---------------------------------------------------------------------------
// OpenQASM

std::string export_qasm(const Circuit& circuit) {
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out += "qreg q[" + std::to_string(circuit.num_qubits()) + "];\n";
    if (circuit.num_classical_bits() > 0) {
        out += "creg c[" + std::to_string(circuit.num_classical_bits()) + "];\n";
    }
    for (std::uint32_t i = 0; i < circuit.num_qubits(); ++i) {
        const auto& label = circuit.qubit_label(QubitId{i});
        if (!label.empty()) {
            out += "// label q[" + std::to_string(i) + "] " + label + "\n";
        }
    }
    for (std::uint32_t i = 0; i < circuit.num_classical_bits(); ++i) {
        const auto& label = circuit.classical_label(ClassicalBitId{i});
        if (!label.empty()) {
            out += "// label c[" + std::to_string(i) + "] " + label + "\n";
        }
    }
    for (const auto& gate : circuit.gates()) {
        out += to_string(gate) + ";\n";
    }
    return out;
}

namespace {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

struct RegisterRef {
    std::string name;
    std::uint32_t index;
};

std::optional<RegisterRef> parse_ref(std::string_view text) {
    text = trim(text);
    const auto open = text.find('[');
    if (open == std::string_view::npos || open == 0 || text.back() != ']') {
        return std::nullopt;
    }
    const std::string_view digits = text.substr(open + 1, text.size() - open - 2);
    std::uint32_t index = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
        return std::nullopt;
    }
    return RegisterRef{std::string(trim(text.substr(0, open))), index};
}

std::vector<std::string_view> split_args(std::string_view text) {
    std::vector<std::string_view> args;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        args.push_back(trim(text.substr(start, comma == text.npos ? text.npos : comma - start)));
        if (comma == text.npos) {
            return args;
        }
        start = comma + 1;
    }
}

}  // namespace

Circuit import_qasm(std::string_view text) {
    struct Pending {
        std::size_t line;
        std::string statement;
    };
    std::vector<Pending> statements;
    std::vector<std::pair<std::string, std::string>> labels;

    std::size_t number = 0;
    std::size_t start = 0;
    std::string carry;
    while (start <= text.size()) {
        ++number;
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == text.npos ? text.npos : end - start);
        start = end == text.npos ? text.size() + 1 : end + 1;

        if (const auto comment = line.find("//"); comment != line.npos) {
            const std::string_view body = trim(line.substr(comment + 2));
            if (body.starts_with("label ")) {
                const std::string_view rest = trim(body.substr(6));
                const auto space = rest.find(' ');
                if (space != rest.npos) {
                    labels.emplace_back(std::string(rest.substr(0, space)),
                                        std::string(trim(rest.substr(space + 1))));
                }
            }
            line = line.substr(0, comment);
        }
        std::size_t pos = 0;
        while (true) {
            const auto semi = line.find(';', pos);
            if (semi == line.npos) {
                carry += std::string(line.substr(pos)) + " ";
                break;
            }
            carry += std::string(line.substr(pos, semi - pos));
            if (!trim(carry).empty()) {
                statements.push_back({number, std::string(trim(carry))});
            }
            carry.clear();
            pos = semi + 1;
        }
    }
    if (!trim(carry).empty()) {
        throw SyntaxError(number, 1, "unterminated statement '" + std::string(trim(carry)) + "'");
    }

    std::optional<std::pair<std::string, std::uint32_t>> qreg;
    std::optional<std::pair<std::string, std::uint32_t>> creg;
    std::vector<Gate> gates;
    bool header_seen = false;

    for (const auto& [line, statement] : statements) {
        const std::string_view stmt = statement;
        const auto space = stmt.find_first_of(" \t");
        const std::string_view op = stmt.substr(0, space);
        const std::string_view args = space == stmt.npos ? std::string_view{} : trim(stmt.substr(space));

        if (op == "OPENQASM") {
            if (args != "2.0") {
                throw SyntaxError(line, 1, "unsupported OpenQASM version '" + std::string(args) + "'");
            }
            header_seen = true;
            continue;
        }
        if (!header_seen) {
            throw SyntaxError(line, 1, "missing 'OPENQASM 2.0;' header");
        }
        if (op == "include") {
            continue;
        }
        if (op == "qreg" || op == "creg") {
            auto ref = parse_ref(args);
            auto& slot = op == "qreg" ? qreg : creg;
            if (!ref || slot) {
                throw SyntaxError(line, 1, "bad or repeated register declaration '" + statement + "'");
            }
            slot = std::make_pair(ref->name, ref->index);
            continue;
        }
        if (!qreg) {
            throw SyntaxError(line, 1, "gate before qreg declaration");
        }
        auto qubit = [&](std::string_view arg) {
            auto ref = parse_ref(arg);
            if (!ref || ref->name != qreg->first) {
                throw SyntaxError(line, 1, "expected qubit reference but found '" + std::string(arg) + "'");
            }
            return QubitId{ref->index};
        };
        if (op == "measure") {
            const auto arrow = args.find("->");
            if (arrow == args.npos || !creg) {
                throw SyntaxError(line, 1, "malformed measure '" + statement + "'");
            }
            auto target = parse_ref(args.substr(arrow + 2));
            if (!target || target->name != creg->first) {
                throw SyntaxError(line, 1, "expected classical bit in '" + statement + "'");
            }
            gates.push_back(Gate::measure(qubit(args.substr(0, arrow)), ClassicalBitId{target->index}));
            continue;
        }
        const auto operands = split_args(args);
        if (op == "x" && operands.size() == 1) {
            gates.push_back(Gate::x(qubit(operands[0])));
        } else if (op == "cx" && operands.size() == 2) {
            gates.push_back(Gate::cnot(qubit(operands[0]), qubit(operands[1])));
        } else if (op == "ccx" && operands.size() == 3) {
            gates.push_back(Gate::ccnot(qubit(operands[0]), qubit(operands[1]), qubit(operands[2])));
        } else {
            throw SyntaxError(line, 1, "unsupported statement '" + statement + "'");
        }
    }
    if (!qreg) {
        throw SyntaxError(number, 1, "missing qreg declaration");
    }

    Circuit circuit(qreg->second, creg ? creg->second : 0);
    for (const auto& gate : gates) {
        circuit.append(gate);
    }
    for (const auto& [ref_text, label] : labels) {
        auto ref = parse_ref(ref_text);
        if (!ref) {
            continue;
        }
        if (ref->name == qreg->first) {
            circuit.set_qubit_label(QubitId{ref->index}, label);
        } else if (creg && ref->name == creg->first) {
            circuit.set_classical_label(ClassicalBitId{ref->index}, label);
        }
    }
    return circuit;
}

}  // namespace qrbs
