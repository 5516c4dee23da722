#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdich/compiler.hpp"
#include "qdich/error.hpp"
#include "qdich/io.hpp"
#include "qdich/oracle.hpp"
#include "qdich/tnsim.hpp"

namespace qdich::cli {

namespace {

using json = nlohmann::json;
using Complex = std::complex<double>;

struct Options {
    std::string in;
    std::string out;
    bool iqp = false;
    bool monotone = false;
    std::string subset;
    std::string outcome;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string backend = "auto";
    std::string f;
    double lambda_phase = 0.0;
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

std::string shortest(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

/// "1", "i", "-i", "0.5-0.5i", ...
std::string complex_text(Complex z) {
    constexpr double kTol = 1e-12;
    const double re = std::abs(z.real()) < kTol ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < kTol ? 0.0 : z.imag();
    auto imag_part = [](double v) {
        if (v == 1.0) return std::string("i");
        if (v == -1.0) return std::string("-i");
        return shortest(v) + "i";
    };
    if (im == 0.0) return shortest(re);
    if (re == 0.0) return imag_part(im);
    std::string s = imag_part(im);
    return shortest(re) + (s[0] == '-' ? "" : "+") + s;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int v = 0;
        auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size()) usage("bad subset entry \"" + item + "\"");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> out;
    for (char c : s) {
        if (c != '0' && c != '1') usage("outcome must be a string of 0s and 1s");
        out.push_back(c - '0');
    }
    return out;
}

std::optional<Backend> requested_backend(const std::string& name) {
    if (name == "auto") return std::nullopt;
    if (name == "exact") return Backend::Exact;
    if (name == "float") return Backend::Float;
    usage("backend must be exact or float");
}

/// Runs `fn` on the requested backend; "auto" prefers exact and falls back to
/// float when some gate has no exact form.
template <class Fn>
auto with_backend(const std::string& name, Fn&& fn) {
    if (auto b = requested_backend(name)) return std::pair{fn(*b), *b};
    try {
        return std::pair{fn(Backend::Exact), Backend::Exact};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ExactBackendUnsupportedGate) throw;
    }
    return std::pair{fn(Backend::Float), Backend::Float};
}

const char* backend_name(Backend b) { return b == Backend::Exact ? "exact" : "float"; }

SingleQubitUnitary parse_unitary(const std::string& spec) {
    if (spec.empty() || spec[0] != '[') return SingleQubitUnitary::named(spec);
    json m;
    try {
        m = json::parse(spec);
    } catch (const json::parse_error&) {
        usage("matrix must be JSON [[re,im] x 4] or [[a,b],[c,d]] with real entries");
    }
    std::array<Complex, 4> e{};
    auto number = [](const json& x) -> Complex {
        if (x.is_number()) return {x.get<double>(), 0.0};
        if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
            return {x[0].get<double>(), x[1].get<double>()};
        }
        usage("matrix entries must be numbers or [re, im] pairs");
    };
    if (m.is_array() && m.size() == 4) {
        for (std::size_t i = 0; i < 4; ++i) e[i] = number(m[i]);
    } else if (m.is_array() && m.size() == 2 && m[0].is_array() && m[0].size() == 2 && m[1].is_array() &&
               m[1].size() == 2) {
        for (std::size_t i = 0; i < 4; ++i) e[i] = number(m[i / 2][i % 2]);
    } else {
        usage("matrix must have 4 entries");
    }
    return SingleQubitUnitary::from_complex(e);
}

int cmd_compile(const Options& o, std::ostream& out) {
    const Circuit c = io::circuit_from_json(io::read_file(o.in));
    CompileReport report;
    std::string text;
    if (o.iqp) {
        text = io::iqp_to_json(compile_iqp(c, o.monotone, &report));
    } else {
        text = io::instance_to_json(compile(c, o.monotone, &report));
    }
    const std::string report_text = io::report_to_json(report);
    if (o.out.empty()) {
        out << text;
        return kOk;
    }
    io::write_file(o.out, text);
    io::write_file(o.out + ".report.json", report_text);
    out << report_text;
    return kOk;
}

int cmd_marginal(const Options& o, std::ostream& out) {
    const QaoaInstance inst = io::instance_from_json(io::read_file(o.in));
    const auto subset = parse_int_list(o.subset);
    const auto outcome = parse_bits(o.outcome);
    const double p = marginal(inst, subset, outcome);
    json j{{"subset", subset}, {"outcome", o.outcome}, {"probability", p}};
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
    const QaoaInstance inst = io::instance_from_json(io::read_file(o.in));
    std::string text;
    for (const auto& s : sample(inst, o.seed, o.count)) text += s + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        io::write_file(o.out, text);
    }
    return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
    const Circuit c = io::circuit_from_json(io::read_file(o.in));
    auto [dist, backend] = with_backend(o.backend, [&](Backend b) { return post_selected_distribution(c, b); });
    json j = json::parse(io::distribution_to_json(dist));
    j["backend"] = backend_name(backend);
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_gadget(const Options& o, std::ostream& out) {
    const GadgetSpec g = gadget_solve(parse_unitary(o.f), o.lambda_phase);
    json j;
    json f = json::array();
    for (Complex z : g.f.entries) f.push_back(complex_json(z));
    j["F"] = f;
    j["r0"] = complex_json(g.r0);
    j["r1"] = complex_json(g.r1);
    j["lambda"] = complex_json(g.lambda);
    json w = json::array();
    std::string diag = "diag(";
    for (std::size_t i = 0; i < 4; ++i) {
        w.push_back(complex_json(g.w[i]));
        diag += (i ? ", " : "") + complex_text(g.w[i]);
    }
    j["w"] = w;
    j["W"] = diag + ")";
    if (g.exact_w) {
        json ex;
        ex["r0"] = (*g.exact_r)[0].to_string();
        ex["r1"] = (*g.exact_r)[1].to_string();
        ex["lambda"] = g.exact_lambda->to_string();
        json ew = json::array();
        for (const Cyclotomic& z : *g.exact_w) ew.push_back(z.to_string());
        ex["w"] = ew;
        j["exact"] = ex;
    }
    out << j.dump(2) << "\n";
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const Circuit source = io::circuit_from_json(io::read_file(o.in));
    CompileReport report;
    Circuit compiled;
    if (o.iqp) {
        compiled = compile_iqp(source, o.monotone, &report).to_circuit();
    } else {
        compiled = qaoa_to_circuit(compile(source, o.monotone, &report));
    }
    auto [pair, backend] = with_backend(o.backend, [&](Backend b) {
        return std::pair{post_selected_distribution(source, b), post_selected_distribution(compiled, b)};
    });
    const auto& [want, got] = pair;
    double deviation = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        deviation = std::max(deviation, std::abs(want.probabilities[i] - got.probabilities[i]));
    }
    const MultiplicativeError c = multiplicative_error(want, got);
    json j;
    j["backend"] = backend_name(backend);
    j["source_qubits"] = source.n_qubits;
    j["compiled_qubits"] = compiled.n_qubits;
    j["post_selected"] = report.post_selected;
    j["interaction_degree"] = report.interaction_degree;
    j["max_deviation"] = deviation;
    if (c.infinite) {
        j["multiplicative_error"] = "infinite";
    } else {
        j["multiplicative_error"] = c.value;
    }
    if (c.exact) j["exact_multiplicative_error"] = c.exact->to_string();
    j["conditioning_probability"] = got.conditioning_probability;
    if (got.exact_conditioning) j["exact_conditioning_probability"] = got.exact_conditioning->to_string();
    const bool match = backend == Backend::Exact ? (c.exact && *c.exact == QuadraticReal(Rational(1)))
                                                  : (!c.infinite && deviation < 1e-9);
    j["match"] = match;
    out << j.dump(2) << "\n";
    return match ? kOk : kInternalError;
}

int cmd_graph_info(const Options& o, std::ostream& out) {
    const QaoaInstance inst = io::instance_from_json(io::read_file(o.in));
    const InteractionGraph g = interaction_graph(inst.cost);
    json j;
    j["n"] = inst.n;
    j["p"] = inst.p;
    j["degrees"] = g.degrees();
    j["max_degree"] = g.max_degree;
    json edges = json::array();
    for (const auto& [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = edges;
    if (g.max_degree <= 2) {
        json comps = json::array();
        for (const Component& c : decompose(g)) {
            comps.push_back({{"kind", to_string(c.kind)}, {"vertices", c.vertices}});
        }
        j["components"] = comps;
    } else {
        j["components"] = nullptr;
    }
    const CutProfile prof = cut_width(inst);
    j["cut_profile"] = {{"ordering", prof.ordering},
                        {"edge_crossings", prof.edge_crossings},
                        {"gate_crossings", prof.gate_crossings},
                        {"max_delta", prof.max_delta},
                        {"cut_width", prof.cut_width}};
    out << j.dump(2) << "\n";
    return kOk;
}

int exit_code(ErrorCode code) { return code == ErrorCode::InvariantViolated ? kInternalError : kInputError; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile and simulate post-selected QAOA instances", "qdich"};
    app.require_subcommand(1);
    Options o;

    auto* compile_cmd = app.add_subcommand("compile", "compile a circuit into a QAOA (or IQP) instance");
    compile_cmd->add_option("--in", o.in, "circuit JSON")->required();
    compile_cmd->add_option("--out", o.out, "instance JSON; a report goes to <out>.report.json");
    compile_cmd->add_flag("--iqp", o.iqp, "emit the IQP variant");
    compile_cmd->add_flag("--monotone", o.monotone, "make every term nondecreasing");

    auto* marginal_cmd = app.add_subcommand("marginal", "marginal probability of a degree-2 instance");
    marginal_cmd->add_option("--in", o.in, "instance JSON")->required();
    marginal_cmd->add_option("--subset", o.subset, "comma-separated qubits")->required();
    marginal_cmd->add_option("--outcome", o.outcome, "bits for the subset, in subset order")->required();

    auto* sample_cmd = app.add_subcommand("sample", "exact samples from a degree-2 instance");
    sample_cmd->add_option("--in", o.in, "instance JSON")->required();
    sample_cmd->add_option("--count", o.count, "number of samples")->required();
    sample_cmd->add_option("--seed", o.seed, "RNG seed");
    sample_cmd->add_option("--out", o.out, "output file, one bitstring per line");

    auto* oracle_cmd = app.add_subcommand("oracle", "post-selected output distribution by statevector");
    oracle_cmd->add_option("--in", o.in, "circuit JSON")->required();
    oracle_cmd->add_option("--backend", o.backend, "exact, float or auto");

    auto* gadget_cmd = app.add_subcommand("gadget", "solve for the diagonal coupling of a gate");
    gadget_cmd->add_option("--F", o.f, "H, Htilde, Tdg, X, I, xrot:<rad> or a JSON matrix")->required();
    gadget_cmd->add_option("--lambda-phase", o.lambda_phase, "phase of lambda in radians");

    auto* verify_cmd = app.add_subcommand("verify", "compile and compare against the oracle");
    verify_cmd->add_option("--in", o.in, "circuit JSON")->required();
    verify_cmd->add_option("--backend", o.backend, "exact, float or auto");
    verify_cmd->add_flag("--iqp", o.iqp, "verify the IQP variant");
    verify_cmd->add_flag("--monotone", o.monotone, "verify the monotone rewrite");

    auto* graph_cmd = app.add_subcommand("graph-info", "interaction graph, components and cut profile");
    graph_cmd->add_option("--in", o.in, "instance JSON")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (compile_cmd->parsed()) return cmd_compile(o, out);
        if (marginal_cmd->parsed()) return cmd_marginal(o, out);
        if (sample_cmd->parsed()) return cmd_sample(o, out);
        if (oracle_cmd->parsed()) return cmd_oracle(o, out);
        if (gadget_cmd->parsed()) return cmd_gadget(o, out);
        if (verify_cmd->parsed()) return cmd_verify(o, out);
        if (graph_cmd->parsed()) return cmd_graph_info(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    err << "error: no command\n";
    return kInputError;
}

}  // namespace qdich::cli
