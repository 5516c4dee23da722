#include "qdich/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdich/error.hpp"

namespace qdich::io {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

json parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top-level JSON value must be an object");
    if (j.contains("format") && j["format"] != kFormat) {
        bad("unsupported format " + j["format"].dump());
    }
    return j;
}

template <class T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string("field \"") + key + "\" has the wrong type");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? get<T>(j, key) : fallback;
}

json complex_array(const auto& entries) {
    json out = json::array();
    for (const auto& z : entries) out.push_back({z.real(), z.imag()});
    return out;
}

template <std::size_t N>
std::array<std::complex<double>, N> complex_params(const json& params) {
    if (!params.is_array() || params.size() != N) bad("diagonal gate needs " + std::to_string(N) + " [re, im] pairs");
    std::array<std::complex<double>, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        const json& z = params[i];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) bad("expected [re, im] pair");
        out[i] = {z[0].get<double>(), z[1].get<double>()};
    }
    return out;
}

std::vector<int> int_params(const json& params, std::size_t n) {
    if (!params.is_array() || params.size() != n) bad("expected " + std::to_string(n) + " integer params");
    std::vector<int> out;
    for (const json& x : params) {
        if (!x.is_number_integer()) bad("phase residues must be integers");
        out.push_back(x.get<int>());
    }
    return out;
}

json gate_to_json(const Gate& g) {
    json params = json::array();
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PhaseDiag1> || std::is_same_v<K, PhaseDiag2>) {
                for (int d : k.entries) params.push_back(d);
            } else if constexpr (std::is_same_v<K, XRot>) {
                params.push_back(k.angle);
            } else if constexpr (std::is_same_v<K, GeneralDiag1> || std::is_same_v<K, GeneralDiag2>) {
                params = complex_array(k.entries);
            }
        },
        g.kind);
    return {{"kind", g.name()}, {"qubits", g.qubits}, {"params", params}};
}

Gate gate_from_json(const json& j) {
    if (!j.is_object()) bad("gate must be an object");
    const auto kind = get<std::string>(j, "kind");
    const auto qubits = get<std::vector<int>>(j, "qubits");
    const json params = j.contains("params") ? j["params"] : json::array();
    Gate g;
    if (kind == "H") {
        g.kind = H{};
    } else if (kind == "Tdg") {
        g.kind = Tdg{};
    } else if (kind == "CZ") {
        g.kind = CZ{};
    } else if (kind == "PhaseDiag1") {
        auto d = int_params(params, 2);
        g = Gate::phase1(0, d[0], d[1]);
    } else if (kind == "PhaseDiag2") {
        auto d = int_params(params, 4);
        g = Gate::phase2(0, 1, d[0], d[1], d[2], d[3]);
    } else if (kind == "XRot") {
        if (!params.is_array() || params.size() != 1 || !params[0].is_number()) bad("XRot needs one angle param");
        g.kind = XRot{params[0].get<double>()};
    } else if (kind == "GeneralDiag1") {
        g.kind = GeneralDiag1{complex_params<2>(params)};
    } else if (kind == "GeneralDiag2") {
        g.kind = GeneralDiag2{complex_params<4>(params)};
    } else {
        throw Error(ErrorCode::UnsupportedGate, "unknown gate kind \"" + kind + "\"");
    }
    g.qubits = qubits;
    if (g.qubits.size() != g.arity()) bad(kind + " acts on " + std::to_string(g.arity()) + " qubit(s)");
    return g;
}

json output_map_to_json(const OutputMap& m) {
    json out = json::object();
    for (const auto& [k, q] : m) out[std::to_string(k)] = q;
    return out;
}

OutputMap output_map_from_json(const json& j) {
    OutputMap m;
    if (!j.contains("output_map")) return m;
    const json& o = j["output_map"];
    if (!o.is_object()) bad("output_map must be an object");
    for (const auto& [k, v] : o.items()) {
        int key = 0;
        try {
            std::size_t used = 0;
            key = std::stoi(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            bad("output_map key \"" + k + "\" is not an integer");
        }
        if (!v.is_number_integer()) bad("output_map values must be qubit indices");
        m[key] = v.get<int>();
    }
    return m;
}

json terms_to_json(const CostFunction& cost) {
    json terms = json::array();
    for (const Term& t : cost.terms) terms.push_back({{"support", t.support}, {"table", t.table}});
    return terms;
}

CostFunction cost_from_json(const json& j, int n) {
    CostFunction cost;
    cost.n_vars = n;
    const json terms = j.contains("terms") ? j["terms"] : json::array();
    if (!terms.is_array()) bad("terms must be an array");
    bool all_integer = true;
    for (const json& t : terms) {
        if (!t.is_object()) bad("term must be an object");
        Term term{get<std::vector<int>>(t, "support"), get<std::vector<double>>(t, "table")};
        for (double x : term.table) all_integer = all_integer && std::isfinite(x) && x == std::round(x);
        cost.terms.push_back(std::move(term));
    }
    cost.integer_valued = get_or<bool>(j, "integer_valued", all_integer);
    return cost;
}

std::set<Qubit> post_select_from_json(const json& j) {
    const auto v = get_or<std::vector<int>>(j, "post_select", {});
    return {v.begin(), v.end()};
}

}  // namespace

std::string circuit_to_json(const Circuit& c) {
    json j;
    j["format"] = kFormat;
    j["n"] = c.n_qubits;
    json prep = json::array();
    for (Prep p : c.prep) prep.push_back(p == Prep::Plus ? "plus" : "zero");
    j["prep"] = prep;
    json gates = json::array();
    for (const Gate& g : c.gates) gates.push_back(gate_to_json(g));
    j["gates"] = gates;
    j["post_select"] = std::vector<int>(c.post_select.begin(), c.post_select.end());
    if (!c.post_select_at.empty()) {
        json at = json::object();
        for (const auto& [q, i] : c.post_select_at) at[std::to_string(q)] = i;
        j["post_select_at"] = at;
    }
    j["output_map"] = output_map_to_json(c.output_map);
    return j.dump(2) + "\n";
}

Circuit circuit_from_json(const std::string& text) {
    const json j = parse(text);
    Circuit c = Circuit::zeros(get<int>(j, "n"));
    if (c.n_qubits <= 0) bad("n must be positive");
    if (j.contains("prep")) {
        const auto prep = get<std::vector<std::string>>(j, "prep");
        if (prep.size() != static_cast<std::size_t>(c.n_qubits)) bad("prep must list one state per qubit");
        for (std::size_t q = 0; q < prep.size(); ++q) {
            if (prep[q] == "plus") {
                c.prep[q] = Prep::Plus;
            } else if (prep[q] == "zero") {
                c.prep[q] = Prep::Zero;
            } else {
                bad("prep entries must be \"plus\" or \"zero\"");
            }
        }
    }
    const json gates = j.contains("gates") ? j["gates"] : json::array();
    if (!gates.is_array()) bad("gates must be an array");
    for (const json& g : gates) c.gates.push_back(gate_from_json(g));
    c.post_select = post_select_from_json(j);
    if (j.contains("post_select_at")) {
        for (const auto& [k, v] : j["post_select_at"].items()) {
            if (!v.is_number_unsigned()) bad("post_select_at values must be gate indices");
            c.post_select_at[std::stoi(k)] = v.get<std::size_t>();
        }
    }
    c.output_map = output_map_from_json(j);
    const auto violations = validate(c);
    if (!violations.empty()) bad("invalid circuit: " + violations.front());
    return c;
}

std::string instance_to_json(const QaoaInstance& inst) {
    json j;
    j["format"] = kFormat;
    j["n"] = inst.n;
    j["p"] = inst.p;
    j["terms"] = terms_to_json(inst.cost);
    j["integer_valued"] = inst.cost.integer_valued;
    j["gammas"] = inst.gammas;
    j["betas"] = inst.betas;
    j["post_select"] = std::vector<int>(inst.post_select.begin(), inst.post_select.end());
    j["output_map"] = output_map_to_json(inst.output_map);
    return j.dump(2) + "\n";
}

QaoaInstance instance_from_json(const std::string& text) {
    const json j = parse(text);
    QaoaInstance inst;
    inst.n = get<int>(j, "n");
    inst.p = get<int>(j, "p");
    inst.cost = cost_from_json(j, inst.n);
    inst.gammas = get<std::vector<double>>(j, "gammas");
    inst.betas = get<std::vector<double>>(j, "betas");
    inst.post_select = post_select_from_json(j);
    inst.output_map = output_map_from_json(j);
    inst.check();
    return inst;
}

std::string iqp_to_json(const IqpInstance& inst) {
    json j;
    j["format"] = kFormat;
    j["kind"] = "iqp";
    j["n"] = inst.n;
    j["terms"] = terms_to_json(inst.cost);
    j["integer_valued"] = inst.cost.integer_valued;
    j["post_select"] = std::vector<int>(inst.post_select.begin(), inst.post_select.end());
    j["output_map"] = output_map_to_json(inst.output_map);
    return j.dump(2) + "\n";
}

IqpInstance iqp_from_json(const std::string& text) {
    const json j = parse(text);
    IqpInstance inst;
    inst.n = get<int>(j, "n");
    inst.cost = cost_from_json(j, inst.n);
    inst.post_select = post_select_from_json(j);
    inst.output_map = output_map_from_json(j);
    inst.cost.check();
    return inst;
}

std::string distribution_to_json(const Distribution& d) {
    json j;
    j["qubits"] = d.qubits;
    json outcomes = json::object();
    for (std::size_t i = 0; i < d.size(); ++i) outcomes[d.bitstring(i)] = d.probabilities[i];
    j["outcomes"] = outcomes;
    j["conditioning_probability"] = d.conditioning_probability;
    if (d.exact) {
        json exact = json::object();
        for (std::size_t i = 0; i < d.size(); ++i) exact[d.bitstring(i)] = (*d.exact)[i].to_string();
        j["exact_outcomes"] = exact;
    }
    if (d.exact_conditioning) j["exact_conditioning_probability"] = d.exact_conditioning->to_string();
    return j.dump(2) + "\n";
}

std::string report_to_json(const CompileReport& r) {
    json j;
    j["source_qubits"] = r.source_qubits;
    j["auxiliary_qubits"] = r.auxiliary_qubits;
    j["post_selected"] = r.post_selected;
    j["interaction_degree"] = r.interaction_degree;
    json hist = json::object();
    for (const auto& [deg, count] : r.degree_histogram) hist[std::to_string(deg)] = count;
    j["degree_histogram"] = hist;
    json chains = json::object();
    for (const auto& [w, qs] : r.chains.chain) chains[std::to_string(w)] = qs;
    j["wire_chains"] = chains;
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cannot write " + path);
    out << text;
    if (!out) bad("failed writing " + path);
}

}  // namespace qdich::io
