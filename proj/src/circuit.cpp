#include "qdich/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdich/error.hpp"

namespace qdich {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int mod8(long long v) { return static_cast<int>(((v % 8) + 8) % 8); }

std::complex<double> phase_of_residue(int d) {
    return std::polar(1.0, -std::numbers::pi * d / 4.0);
}

}  // namespace

Gate Gate::phase1(Qubit q, int d0, int d1) {
    return {PhaseDiag1{{mod8(d0), mod8(d1)}}, {q}};
}

Gate Gate::phase2(Qubit a, Qubit b, int d00, int d01, int d10, int d11) {
    return {PhaseDiag2{{mod8(d00), mod8(d01), mod8(d10), mod8(d11)}}, {a, b}};
}

std::string Gate::name() const {
    return std::visit(Overloaded{
                          [](const H&) { return "H"; },
                          [](const Tdg&) { return "Tdg"; },
                          [](const CZ&) { return "CZ"; },
                          [](const PhaseDiag1&) { return "PhaseDiag1"; },
                          [](const PhaseDiag2&) { return "PhaseDiag2"; },
                          [](const XRot&) { return "XRot"; },
                          [](const GeneralDiag1&) { return "GeneralDiag1"; },
                          [](const GeneralDiag2&) { return "GeneralDiag2"; },
                      },
                      kind);
}

std::size_t Gate::arity() const {
    if (std::holds_alternative<CZ>(kind) || std::holds_alternative<PhaseDiag2>(kind) ||
        std::holds_alternative<GeneralDiag2>(kind)) {
        return 2;
    }
    return 1;
}

bool Gate::is_diagonal() const {
    return !std::holds_alternative<H>(kind) && !std::holds_alternative<XRot>(kind);
}

std::vector<int> Gate::phase_residues() const {
    return std::visit(Overloaded{
                          [](const Tdg&) { return std::vector<int>{0, 1}; },
                          [](const CZ&) { return std::vector<int>{0, 0, 0, 4}; },
                          [](const PhaseDiag1& g) {
                              return std::vector<int>(g.entries.begin(), g.entries.end());
                          },
                          [](const PhaseDiag2& g) {
                              return std::vector<int>(g.entries.begin(), g.entries.end());
                          },
                          [this](const auto&) -> std::vector<int> {
                              throw Error(ErrorCode::NonDiagonalResidue,
                                          name() + " has no exact phase residues");
                          },
                      },
                      kind);
}

std::vector<std::complex<double>> Gate::diagonal_entries() const {
    if (const auto* g = std::get_if<GeneralDiag1>(&kind)) {
        return {g->entries.begin(), g->entries.end()};
    }
    if (const auto* g = std::get_if<GeneralDiag2>(&kind)) {
        return {g->entries.begin(), g->entries.end()};
    }
    std::vector<std::complex<double>> out;
    for (int d : phase_residues()) {
        out.push_back(phase_of_residue(d));
    }
    return out;
}

Circuit Circuit::zeros(int n) {
    Circuit c;
    c.n_qubits = n;
    c.prep.assign(static_cast<std::size_t>(n), Prep::Zero);
    return c;
}

Circuit Circuit::pluses(int n) {
    Circuit c = zeros(n);
    c.prep.assign(static_cast<std::size_t>(n), Prep::Plus);
    return c;
}

OutputMap Circuit::effective_output_map() const {
    if (!output_map.empty()) {
        return output_map;
    }
    OutputMap m;
    for (Qubit q = 0; q < n_qubits; ++q) {
        if (post_select.count(q) == 0) {
            m.emplace(q, q);
        }
    }
    return m;
}

std::vector<std::string> validate(const Circuit& circuit) {
    std::vector<std::string> out;
    auto report = [&out](const std::string& s) { out.push_back(s); };
    const int n = circuit.n_qubits;
    if (n <= 0) {
        report("n_qubits must be positive, got " + std::to_string(n));
    }
    if (circuit.prep.size() != static_cast<std::size_t>(std::max(n, 0))) {
        report("prep has " + std::to_string(circuit.prep.size()) + " entries for " +
               std::to_string(n) + " qubits");
    }
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        std::string where = "gate " + std::to_string(i) + " (" + g.name() + ")";
        if (g.qubits.size() != g.arity()) {
            report(where + " expects " + std::to_string(g.arity()) + " qubits, got " +
                   std::to_string(g.qubits.size()));
        }
        for (Qubit q : g.qubits) {
            if (q < 0 || q >= n) {
                report(where + " qubit " + std::to_string(q) + " out of range");
            }
        }
        if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
            report(where + " repeats qubit " + std::to_string(g.qubits[0]));
        }
        if (const auto* p1 = std::get_if<PhaseDiag1>(&g.kind)) {
            for (int d : p1->entries) {
                if (d < 0 || d > 7) report(where + " residue " + std::to_string(d) + " outside 0..7");
            }
        }
        if (const auto* p2 = std::get_if<PhaseDiag2>(&g.kind)) {
            for (int d : p2->entries) {
                if (d < 0 || d > 7) report(where + " residue " + std::to_string(d) + " outside 0..7");
            }
        }
        for (Qubit q : g.qubits) {
            if (circuit.post_select.count(q) == 0) continue;
            auto at = circuit.post_select_at.find(q);
            if (at != circuit.post_select_at.end() && i >= at->second) {
                report(where + " acts on qubit " + std::to_string(q) +
                       " after its post-selection");
            }
        }
    }
    for (Qubit q : circuit.post_select) {
        if (q < 0 || q >= n) report("post-selected qubit " + std::to_string(q) + " out of range");
    }
    for (const auto& [q, at] : circuit.post_select_at) {
        if (circuit.post_select.count(q) == 0) {
            report("post_select_at names qubit " + std::to_string(q) + " outside post_select");
        }
        if (at > circuit.gates.size()) {
            report("post_select_at for qubit " + std::to_string(q) + " beyond the gate list");
        }
    }
    std::set<Qubit> targets;
    for (const auto& [wire, q] : circuit.output_map) {
        if (q < 0 || q >= n) {
            report("output wire " + std::to_string(wire) + " maps to out-of-range qubit " +
                   std::to_string(q));
        }
        if (!targets.insert(q).second) {
            report("output_map is not injective at qubit " + std::to_string(q));
        }
        if (circuit.post_select.count(q) != 0) {
            report("output wire " + std::to_string(wire) + " maps to post-selected qubit " +
                   std::to_string(q));
        }
    }
    return out;
}

bool Term::depends_on_first() const {
    if (support.size() == 1) return table[0] != table[1];
    return table[0] != table[2] || table[1] != table[3];
}

bool Term::depends_on_second() const {
    if (support.size() == 1) return false;
    return table[0] != table[1] || table[2] != table[3];
}

double CostFunction::evaluate(std::uint64_t assignment) const {
    auto bit = [&](int v) {
        return static_cast<int>((assignment >> (n_vars - 1 - v)) & 1U);
    };
    double total = 0.0;
    for (const Term& t : terms) {
        total += t.support.size() == 1 ? t.value(bit(t.support[0]))
                                       : t.value(bit(t.support[0]), bit(t.support[1]));
    }
    return total;
}

void CostFunction::check() const {
    if (n_vars <= 0) {
        throw Error(ErrorCode::InvalidInput, "cost needs a positive variable count");
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Term& t = terms[i];
        std::string where = "term " + std::to_string(i);
        if (t.support.empty() || t.support.size() > 2) {
            throw Error(ErrorCode::InvalidInput, where + " must have 1 or 2 variables");
        }
        if (t.table.size() != (std::size_t{1} << t.support.size())) {
            throw Error(ErrorCode::InvalidInput, where + " table length must be 2^|support|");
        }
        for (int v : t.support) {
            if (v < 0 || v >= n_vars) {
                throw Error(ErrorCode::InvalidInput, where + " variable out of range");
            }
        }
        if (t.support.size() == 2 && t.support[0] == t.support[1]) {
            throw Error(ErrorCode::InvalidInput, where + " repeats a variable");
        }
        if (integer_valued) {
            for (double x : t.table) {
                if (x != std::round(x)) {
                    throw Error(ErrorCode::NotIntegerValued, where + " has a non-integer entry");
                }
            }
        }
    }
}

void QaoaInstance::check() const {
    if (n <= 0) throw Error(ErrorCode::InvalidInput, "instance needs n > 0");
    if (p < 0) throw Error(ErrorCode::InvalidInput, "instance needs p >= 0");
    if (cost.n_vars != n) throw Error(ErrorCode::InvalidInput, "cost.n_vars must equal n");
    if (gammas.size() != static_cast<std::size_t>(p) || betas.size() != static_cast<std::size_t>(p)) {
        throw Error(ErrorCode::InvalidInput, "gammas and betas must have exactly p entries");
    }
    cost.check();
    for (Qubit q : post_select) {
        if (q < 0 || q >= n) throw Error(ErrorCode::InvalidInput, "post-selected qubit out of range");
    }
    std::set<Qubit> targets;
    for (const auto& [wire, q] : output_map) {
        if (q < 0 || q >= n || post_select.count(q) != 0 || !targets.insert(q).second) {
            throw Error(ErrorCode::InvalidInput,
                        "output_map entry for wire " + std::to_string(wire) + " is invalid");
        }
    }
}

std::vector<int> InteractionGraph::degrees() const {
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : edges) {
        ++d[static_cast<std::size_t>(a)];
        ++d[static_cast<std::size_t>(b)];
    }
    return d;
}

std::vector<std::vector<int>> InteractionGraph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

InteractionGraph interaction_graph(const CostFunction& cost) {
    InteractionGraph g;
    g.n = cost.n_vars;
    for (const Term& t : cost.terms) {
        if (t.support.size() == 2 && t.depends_on_first() && t.depends_on_second()) {
            g.edges.emplace(std::min(t.support[0], t.support[1]), std::max(t.support[0], t.support[1]));
        }
    }
    for (int d : g.degrees()) g.max_degree = std::max(g.max_degree, d);
    return g;
}

bool quarter_pi_multiple(double angle, int* multiple) {
    double m = angle / (std::numbers::pi / 4.0);
    double r = std::round(m);
    if (std::abs(m - r) > 1e-12 * std::max(1.0, std::abs(m))) {
        return false;
    }
    if (multiple != nullptr) *multiple = mod8(static_cast<long long>(r));
    return true;
}

Circuit qaoa_to_circuit(const QaoaInstance& instance) {
    instance.check();
    Circuit c = Circuit::pluses(instance.n);
    c.gates.reserve(static_cast<std::size_t>(instance.p) *
                    (instance.cost.terms.size() + static_cast<std::size_t>(instance.n)));
    for (int k = 0; k < instance.p; ++k) {
        const double gamma = instance.gammas[static_cast<std::size_t>(k)];
        int m = 0;
        const bool exact = instance.cost.integer_valued && quarter_pi_multiple(gamma, &m);
        for (const Term& t : instance.cost.terms) {
            if (exact) {
                std::vector<int> d;
                for (double v : t.table) d.push_back(mod8(static_cast<long long>(m) * std::llround(v)));
                c.gates.push_back(t.support.size() == 1
                                      ? Gate::phase1(t.support[0], d[0], d[1])
                                      : Gate::phase2(t.support[0], t.support[1], d[0], d[1], d[2], d[3]));
            } else if (t.support.size() == 1) {
                GeneralDiag1 g;
                for (std::size_t i = 0; i < 2; ++i) g.entries[i] = std::polar(1.0, -gamma * t.table[i]);
                c.gates.push_back({g, t.support});
            } else {
                GeneralDiag2 g;
                for (std::size_t i = 0; i < 4; ++i) g.entries[i] = std::polar(1.0, -gamma * t.table[i]);
                c.gates.push_back({g, t.support});
            }
        }
        for (Qubit q = 0; q < instance.n; ++q) {
            c.gates.push_back(Gate::xrot(q, instance.betas[static_cast<std::size_t>(k)]));
        }
    }
    c.post_select = instance.post_select;
    c.output_map = instance.output_map;
    return c;
}

}  // namespace qdich
