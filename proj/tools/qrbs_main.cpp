// qrbs: command-line front end for rule compilation, simulation, logic-base
// reduction and IDC staging.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrbs/categorical.hpp"
#include "qrbs/circuit.hpp"
#include "qrbs/compiler.hpp"
#include "qrbs/error.hpp"
#include "qrbs/idc.hpp"
#include "qrbs/rule_model.hpp"
#include "qrbs/serialize.hpp"
#include "qrbs/simulator.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qrbs::Error(qrbs::ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw qrbs::Error(qrbs::ErrorCode::Io, "cannot write '" + path + "'");
    }
}

std::size_t resolve_max_qubits(const std::optional<std::size_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("QRBS_MAX_QUBITS"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long value = std::stoul(env, &used);
            if (used == std::char_traits<char>::length(env)) {
                return value;
            }
        } catch (const std::exception&) {
        }
        throw qrbs::Error(qrbs::ErrorCode::InvalidArgument,
                          std::string("QRBS_MAX_QUBITS is not a number: '") + env + "'");
    }
    return qrbs::kDefaultMaxQubits;
}

const CLI::Validator kTnmToken(
    [](std::string& value) -> std::string {
        try {
            qrbs::idc::parse_tnm(value);
        } catch (const qrbs::Error& e) {
            return e.what();
        }
        return {};
    },
    "TNM", "TNM classification");

const CLI::Validator kEngineName = CLI::IsMember({"fast", "statevector"});

// ---------------------------------------------------------------------------

struct StageArgs {
    std::string tnm;
    std::string findings;
    std::string engine = "fast";
    std::optional<std::size_t> max_qubits;
    bool explain = false;
    bool json = false;
};

int run_stage(const StageArgs& args) {
    using namespace qrbs::idc;
    TnmClass tnm;
    std::optional<ClinicalFindings> findings;
    if (!args.findings.empty()) {
        findings = findings_from_json(read_file(args.findings));
        tnm = classify_tnm(*findings);
    } else {
        tnm = parse_tnm(args.tnm);
    }
    const qrbs::RunOptions options{.max_qubits = resolve_max_qubits(args.max_qubits)};
    const auto result = stage(tnm, qrbs::parse_engine(args.engine), options);

    if (args.json) {
        json stages = json::array();
        for (Stage s : result.stages.stages()) {
            stages.push_back(to_string(s));
        }
        std::cout << json{{"tnm", to_string(tnm)},
                          {"activated_qubit", result.activated.value},
                          {"bits", result.run.bit_string()},
                          {"stages", stages},
                          {"engine", args.engine}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    if (args.explain) {
        std::cout << "tnm:             " << to_string(tnm) << "\n"
                  << "activated qubit: q" << result.activated.value << "\n"
                  << "output bits:     " << result.run.bit_string() << "  (c7..c0)\n"
                  << "stages:          " << to_string(result.stages) << "\n";
        return 0;
    }
    std::cout << result.run.bit_string() << "  " << to_string(result.stages) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct RlbArgs {
    std::string constraints;
    std::size_t symptoms = 0;
    std::size_t diagnoses = 0;
    std::string case_bits;
    bool json = false;
};

int run_rlb(const RlbArgs& args) {
    using namespace qrbs::categorical;
    const ConstraintFile file = parse_constraints(read_file(args.constraints));
    auto symptom_names = file.symptom_names.value_or(default_names('s', args.symptoms));
    auto diagnosis_names = file.diagnosis_names.value_or(default_names('d', args.diagnoses));
    if (symptom_names.size() != args.symptoms || diagnosis_names.size() != args.diagnoses) {
        throw qrbs::Error(qrbs::ErrorCode::DimensionMismatch,
                          "constraint file declares " + std::to_string(symptom_names.size()) +
                              " symptoms and " + std::to_string(diagnosis_names.size()) +
                              " diagnoses; command line says " + std::to_string(args.symptoms) +
                              " and " + std::to_string(args.diagnoses));
    }
    const LogicBase elb = build_elb(std::move(symptom_names), std::move(diagnosis_names));
    const LogicBase rlb = reduce_to_rlb(elb, file.resolve(elb));

    std::optional<Complex> observed;
    std::optional<Verdict> verdict;
    if (!args.case_bits.empty()) {
        observed = parse_complex(args.case_bits);
        verdict = diagnose(*observed, rlb);
    }

    if (args.json) {
        json pairs = json::array();
        for (const auto& pair : rlb.pairs) {
            pairs.push_back(to_string(pair));
        }
        json out{{"elb_size", elb.pairs.size()}, {"rlb", pairs}};
        if (verdict) {
            json compatible = json::array();
            for (auto d : verdict->compatible) {
                compatible.push_back("D" + std::to_string(d));
            }
            json findings = json::object();
            for (std::size_t i = 0; i < verdict->findings.size(); ++i) {
                findings[rlb.diagnosis_names[i]] = to_string(verdict->findings[i]);
            }
            out["case"] = {{"symptoms", "S" + std::to_string(observed->index())},
                           {"consistent", verdict->consistent()},
                           {"compatible", compatible},
                           {"findings", findings}};
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::cout << "RLB (" << rlb.pairs.size() << " of " << elb.pairs.size() << " pairs):";
    for (const auto& pair : rlb.pairs) {
        std::cout << " " << to_string(pair);
    }
    std::cout << "\n";
    if (verdict) {
        std::cout << "case: S" << observed->index() << " (";
        for (std::size_t i = 0; i < observed->size(); ++i) {
            std::cout << (i ? " " : "") << rlb.symptom_names[i] << "=" << observed->bits[i];
        }
        std::cout << ")\n";
        if (!verdict->consistent()) {
            std::cout << "inconsistent with knowledge base: no compatible diagnosis\n";
            return 0;
        }
        std::cout << "compatible:";
        for (auto d : verdict->compatible) {
            std::cout << " D" << d;
        }
        std::cout << "\n";
        for (std::size_t i = 0; i < verdict->findings.size(); ++i) {
            std::cout << rlb.diagnosis_names[i] << ": " << to_string(verdict->findings[i]) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct CompileArgs {
    std::string rules;
    bool no_share = false;
    bool no_measure_direct = false;
    std::optional<std::size_t> budget;
    std::string output;
    std::string map;
    bool json = false;
};

qrbs::CompileOptions compile_options(bool no_share, bool no_measure_direct,
                                     std::optional<std::size_t> budget) {
    qrbs::CompileOptions options;
    options.share_subexpressions = !no_share;
    options.measure_inputs_directly = !no_measure_direct;
    options.ancilla_budget = budget;
    return options;
}

int run_compile(const CompileArgs& args) {
    const auto network = qrbs::parse_rules(read_file(args.rules));
    const auto compiled =
        qrbs::compile_network(network, compile_options(args.no_share, args.no_measure_direct, args.budget));
    const std::string qasm = qrbs::export_qasm(compiled.circuit);
    const json map = qrbs::compiled_map(compiled);
    if (!args.map.empty()) {
        write_file(args.map, map.dump(2) + "\n");
    }
    if (args.output.empty()) {
        std::cout << qasm;
        return 0;
    }
    write_file(args.output, qasm);
    if (args.json) {
        json summary = map;
        summary["gate_counts"] = qrbs::to_json(qrbs::gate_counts(compiled.circuit));
        std::cout << summary.dump(2) << "\n";
    } else {
        const auto counts = qrbs::gate_counts(compiled.circuit);
        std::cout << "qubits " << compiled.circuit.num_qubits() << " (inputs "
                  << compiled.input_map.size() << ", ancillae " << compiled.ancilla_count
                  << "), classical bits " << compiled.circuit.num_classical_bits() << ", gates "
                  << counts.total << " (x " << counts.x << ", cx " << counts.cnot << ", ccx "
                  << counts.ccnot << ", measure " << counts.measure << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string circuit;
    std::string input = "0";
    std::string engine = "fast";
    std::optional<std::size_t> max_qubits;
    bool dump_state = false;
    bool json = false;
};

std::string format_amplitude(const std::complex<double>& a) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << a.real() << (a.imag() < 0 ? "-" : "+")
        << std::abs(a.imag()) << "i";
    return out.str();
}

int run_simulate(const SimulateArgs& args) {
    const qrbs::Circuit circuit = qrbs::import_qasm(read_file(args.circuit));
    const qrbs::BasisIndex initial = qrbs::parse_basis_string(args.input, circuit.num_qubits());
    const qrbs::RunOptions options{.max_qubits = resolve_max_qubits(args.max_qubits)};
    const auto result = qrbs::run(circuit, initial, qrbs::parse_engine(args.engine), options);

    if (args.dump_state && circuit.num_qubits() > 8) {
        throw qrbs::Error(qrbs::ErrorCode::CapExceeded, "state dump is limited to 8 qubits");
    }
    json state = json::array();
    std::vector<std::string> lines;
    if (args.dump_state) {
        if (const auto* basis = std::get_if<qrbs::BasisIndex>(&result.final_state)) {
            const std::string label = "|" + qrbs::basis_string(*basis, circuit.num_qubits()) + ">";
            lines.push_back(label + " 1");
            state.push_back({{"basis", label}, {"amplitude", "1"}});
        } else {
            const auto& sv = std::get<qrbs::StateVector>(result.final_state);
            for (std::uint64_t i = 0; i < sv.dimension(); ++i) {
                if (std::abs(sv[i]) == 0.0) {
                    continue;
                }
                const std::string label =
                    "|" + qrbs::basis_string(qrbs::BasisIndex{i}, circuit.num_qubits()) + ">";
                lines.push_back(label + " " + format_amplitude(sv[i]));
                state.push_back({{"basis", label}, {"amplitude", format_amplitude(sv[i])}});
            }
        }
    }

    if (args.json) {
        json out{{"bits", result.bit_string()}, {"engine", args.engine}};
        if (args.dump_state) {
            out["state"] = state;
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << result.bit_string() << "\n";
    for (const auto& line : lines) {
        std::cout << line << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
    std::string rules;
    bool idc = false;
    std::string format = "qasm";
    std::string output;
    bool no_share = false;
    bool no_measure_direct = false;
    bool json = false;
};

int run_export(const ExportArgs& args) {
    const auto options = compile_options(args.no_share, args.no_measure_direct, std::nullopt);
    const auto compiled = args.idc ? qrbs::idc::build_idc_circuit(options)
                                   : qrbs::compile_network(qrbs::parse_rules(read_file(args.rules)), options);
    std::string text;
    if (args.json || args.format == "json") {
        json meta = qrbs::circuit_metadata(compiled.circuit);
        meta["ancilla_count"] = compiled.ancilla_count;
        text = meta.dump(2) + "\n";
    } else {
        text = qrbs::export_qasm(compiled.circuit);
    }
    if (args.output.empty()) {
        std::cout << text;
    } else {
        write_file(args.output, text);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyIdcArgs {
    std::string engine = "fast";
    std::optional<std::size_t> max_qubits;
    bool json = false;
};

int run_verify_idc(const VerifyIdcArgs& args) {
    using namespace qrbs::idc;
    const auto compiled = build_idc_circuit();
    const qrbs::RunOptions options{.max_qubits = resolve_max_qubits(args.max_qubits)};
    std::vector<qrbs::Engine> engines;
    if (args.engine == "fast" || args.engine == "all") {
        engines.push_back(qrbs::Engine::Fast);
    }
    if (args.engine == "statevector" || args.engine == "all") {
        engines.push_back(qrbs::Engine::StateVector);
    }

    bool all_pass = true;
    json rows = json::array();
    if (!args.json) {
        std::cout << "TNM        qubit  expected  ";
        for (auto engine : engines) {
            std::cout << std::left << std::setw(12) << to_string(engine);
        }
        std::cout << "stages           result\n";
    }
    for (const auto& row : experiment_table()) {
        bool pass = true;
        std::vector<std::string> got;
        for (auto engine : engines) {
            const auto result = stage(compiled, row.tnm, engine, options);
            got.push_back(result.run.bit_string());
            pass = pass && result.run.bit_string() == row.output_bits &&
                   result.stages == stages_for(row.tnm);
        }
        all_pass = all_pass && pass;
        const StageSet expected = decode_stages(row.output_bits);
        if (args.json) {
            json entry{{"tnm", to_string(row.tnm)},
                       {"qubit", row.qubit},
                       {"expected", std::string(row.output_bits)},
                       {"stages", to_string(expected)},
                       {"pass", pass}};
            for (std::size_t i = 0; i < engines.size(); ++i) {
                entry[qrbs::to_string(engines[i])] = got[i];
            }
            rows.push_back(entry);
            continue;
        }
        std::cout << std::left << std::setw(11) << to_string(row.tnm) << std::setw(7)
                  << ("q" + std::to_string(row.qubit)) << std::setw(10) << row.output_bits;
        for (const auto& bits : got) {
            std::cout << std::setw(12) << bits;
        }
        std::cout << std::setw(17) << to_string(expected) << (pass ? "PASS" : "FAIL") << "\n";
    }
    if (args.json) {
        std::cout << json{{"rows", rows}, {"pass", all_pass}}.dump(2) << "\n";
    } else {
        std::cout << (all_pass ? "all 15 cases match\n" : "MISMATCH\n");
    }
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct VerifyCompileArgs {
    std::string rules;
    bool no_share = false;
    bool no_measure_direct = false;
    bool json = false;
};

int run_verify_compile(const VerifyCompileArgs& args) {
    const auto network = qrbs::parse_rules(read_file(args.rules));
    const auto compiled =
        qrbs::compile_network(network, compile_options(args.no_share, args.no_measure_direct, std::nullopt));
    const auto report = qrbs::verify_compilation(network, compiled);

    auto assignment_string = [](const std::vector<bool>& bits) {
        std::string out;
        for (bool b : bits) {
            out += b ? '1' : '0';
        }
        return out;
    };
    if (args.json) {
        json mismatches = json::array();
        for (const auto& m : report.mismatches) {
            mismatches.push_back({{"inputs", assignment_string(m.inputs)},
                                  {"fact", m.fact},
                                  {"expected", m.expected},
                                  {"actual", m.actual}});
        }
        std::cout << json{{"assignments_checked", report.assignments_checked},
                          {"mismatches", mismatches},
                          {"ok", report.ok()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "checked " << report.assignments_checked << " assignments, "
                  << report.mismatches.size() << " mismatches\n";
        for (const auto& m : report.mismatches) {
            std::cout << "  inputs " << assignment_string(m.inputs) << ": " << m.fact << " expected "
                      << m.expected << " got " << m.actual << "\n";
        }
    }
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qrbs: quantum rule-based systems toolkit"};
    app.require_subcommand(1);

    StageArgs stage_args;
    auto* stage = app.add_subcommand("stage", "Stage an IDC case through the compiled circuit");
    auto* tnm_opt = stage->add_option("--tnm", stage_args.tnm, "TNM classification, e.g. T2,N1,M0")
                        ->check(kTnmToken);
    auto* findings_opt =
        stage->add_option("--findings", stage_args.findings, "Clinical findings JSON file");
    tnm_opt->excludes(findings_opt);
    stage->add_option("--engine", stage_args.engine, "fast or statevector")->check(kEngineName);
    stage->add_option("--max-qubits", stage_args.max_qubits, "Statevector width cap");
    stage->add_flag("--explain", stage_args.explain, "Show activated qubit, bits and stages");
    stage->add_flag("--json", stage_args.json, "Machine-readable output");

    RlbArgs rlb_args;
    auto* rlb = app.add_subcommand("rlb", "Reduce an expanded logic base under constraint rules");
    rlb->add_option("--constraints", rlb_args.constraints, "Constraint file")->required();
    rlb->add_option("--symptoms", rlb_args.symptoms, "Number of symptoms")->required()->check(CLI::PositiveNumber);
    rlb->add_option("--diagnoses", rlb_args.diagnoses, "Number of diagnoses")->required()->check(CLI::PositiveNumber);
    rlb->add_option("--case", rlb_args.case_bits, "Observed symptoms, MSB-first bits (s1 first)");
    rlb->add_flag("--json", rlb_args.json, "Machine-readable output");

    CompileArgs compile_args;
    auto* compile = app.add_subcommand("compile", "Compile a rule file to OpenQASM");
    compile->add_option("--rules", compile_args.rules, "Rule DSL file")->required();
    compile->add_flag("--no-share", compile_args.no_share, "Disable subexpression sharing");
    compile->add_flag("--no-measure-direct", compile_args.no_measure_direct,
                      "Copy aliased facts to ancillae instead of measuring their source qubit");
    compile->add_option("--budget", compile_args.budget, "Ancilla budget");
    compile->add_option("-o,--output", compile_args.output, "QASM output file (stdout if absent)");
    compile->add_option("--map", compile_args.map, "Write input/output map JSON");
    compile->add_flag("--json", compile_args.json, "Machine-readable summary");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Run an OpenQASM circuit from a basis state");
    simulate->add_option("--circuit", simulate_args.circuit, "QASM file")->required();
    simulate->add_option("--input", simulate_args.input,
                         "Initial basis state, q(n-1)..q0; shorter strings are zero-padded");
    simulate->add_option("--engine", simulate_args.engine, "fast or statevector")->check(kEngineName);
    simulate->add_option("--max-qubits", simulate_args.max_qubits, "Statevector width cap");
    simulate->add_flag("--dump-state", simulate_args.dump_state, "Print the final state (<= 8 qubits)");
    simulate->add_flag("--json", simulate_args.json, "Machine-readable output");

    ExportArgs export_args;
    auto* exporter = app.add_subcommand("export", "Export a compiled circuit as QASM or metadata JSON");
    auto* rules_opt = exporter->add_option("--rules", export_args.rules, "Rule DSL file");
    auto* idc_opt = exporter->add_flag("--idc", export_args.idc, "Use the built-in IDC staging rules");
    rules_opt->excludes(idc_opt);
    exporter->add_option("--format", export_args.format, "qasm or json")
        ->check(CLI::IsMember({"qasm", "json"}));
    exporter->add_option("-o,--output", export_args.output, "Output file (stdout if absent)");
    exporter->add_flag("--no-share", export_args.no_share, "Disable subexpression sharing");
    exporter->add_flag("--no-measure-direct", export_args.no_measure_direct,
                       "Copy aliased facts to ancillae");
    exporter->add_flag("--json", export_args.json, "Same as --format json");

    VerifyIdcArgs verify_idc_args;
    auto* verify_idc = app.add_subcommand("verify-idc", "Check all 15 staging cases against the published results");
    verify_idc->add_option("--engine", verify_idc_args.engine, "fast, statevector or all")
        ->check(CLI::IsMember({"fast", "statevector", "all"}));
    verify_idc->add_option("--max-qubits", verify_idc_args.max_qubits, "Statevector width cap");
    verify_idc->add_flag("--json", verify_idc_args.json, "Machine-readable output");

    VerifyCompileArgs verify_compile_args;
    auto* verify_compile =
        app.add_subcommand("verify-compile", "Exhaustively check a compiled rule file against forward evaluation");
    verify_compile->add_option("--rules", verify_compile_args.rules, "Rule DSL file")->required();
    verify_compile->add_flag("--no-share", verify_compile_args.no_share, "Disable subexpression sharing");
    verify_compile->add_flag("--no-measure-direct", verify_compile_args.no_measure_direct,
                             "Copy aliased facts to ancillae");
    verify_compile->add_flag("--json", verify_compile_args.json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (stage->parsed()) {
            if (stage_args.tnm.empty() && stage_args.findings.empty()) {
                std::cerr << "stage: one of --tnm or --findings is required\n";
                return 2;
            }
            return run_stage(stage_args);
        }
        if (rlb->parsed()) {
            return run_rlb(rlb_args);
        }
        if (compile->parsed()) {
            return run_compile(compile_args);
        }
        if (simulate->parsed()) {
            return run_simulate(simulate_args);
        }
        if (exporter->parsed()) {
            if (export_args.rules.empty() && !export_args.idc) {
                std::cerr << "export: one of --rules or --idc is required\n";
                return 2;
            }
            return run_export(export_args);
        }
        if (verify_idc->parsed()) {
            return run_verify_idc(verify_idc_args);
        }
        if (verify_compile->parsed()) {
            return run_verify_compile(verify_compile_args);
        }
    } catch (const qrbs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
