#include "qdich/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "qdich/error.hpp"

namespace qdich {

namespace {

using Complex = std::complex<double>;

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kFloatTolerance = 1e-12;

// Endpoint rotation e^{i pi Z/4} = diag(e^{i pi/4}, e^{-i pi/4}).
Gate endpoint_phase(Qubit q) { return Gate::phase1(q, 7, 1); }
// diag(1, i, 1, -i) = exp(-i pi/4 * (0, 6, 0, 2))
Gate coupling(Qubit a, Qubit j) { return Gate::phase2(a, j, 0, 6, 0, 2); }

enum class Style { Qaoa, Iqp };

enum class WireState { Fresh, Clean, Dirty };

struct Preprocessed {
    Circuit circuit;
    /// IQP: indices of the Hadamards forming the final wall.
    std::set<std::size_t> walls;
};

void require_source(const Circuit& circuit) {
    auto problems = validate(circuit);
    if (!problems.empty()) {
        throw Error(ErrorCode::InvalidInput, "invalid circuit: " + problems.front());
    }
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (!std::holds_alternative<H>(g.kind) && !std::holds_alternative<Tdg>(g.kind) &&
            !std::holds_alternative<CZ>(g.kind)) {
            throw Error(ErrorCode::UnsupportedGate,
                        "gate " + std::to_string(i) + " is " + g.name() + ", expected H, Tdg or CZ");
        }
    }
    if (!circuit.post_select.empty()) {
        throw Error(ErrorCode::InvalidInput, "source circuit must not post-select");
    }
}

Preprocessed preprocess_impl(const Circuit& circuit, Style style) {
    require_source(circuit);
    const auto n = static_cast<std::size_t>(circuit.n_qubits);
    Preprocessed out;
    Circuit& c = out.circuit;
    c.n_qubits = circuit.n_qubits;
    c.prep.assign(n, Prep::Plus);
    c.output_map = circuit.effective_output_map();

    std::vector<WireState> state(n);
    // Index of the last emitted H on each wire, if nothing followed it.
    std::vector<std::ptrdiff_t> trailing_h(n, -1);
    for (std::size_t w = 0; w < n; ++w) {
        state[w] = circuit.prep[w] == Prep::Zero ? WireState::Fresh : WireState::Clean;
    }
    auto emit = [&](Gate g) {
        for (Qubit q : g.qubits) trailing_h[static_cast<std::size_t>(q)] = -1;
        const bool is_h = std::holds_alternative<H>(g.kind);
        const Qubit q0 = g.qubits[0];
        c.gates.push_back(std::move(g));
        if (is_h) trailing_h[static_cast<std::size_t>(q0)] = static_cast<std::ptrdiff_t>(c.gates.size() - 1);
    };

    for (const Gate& g : circuit.gates) {
        if (std::holds_alternative<H>(g.kind)) {
            const auto w = static_cast<std::size_t>(g.qubits[0]);
            if (state[w] != WireState::Fresh) emit(Gate::h(g.qubits[0]));
            state[w] = WireState::Clean;  // a leading H is absorbed into |+>
            continue;
        }
        for (Qubit q : g.qubits) {
            const auto w = static_cast<std::size_t>(q);
            if (state[w] == WireState::Fresh) {
                emit(Gate::h(q));  // |0> = H|+>
            } else if (state[w] == WireState::Dirty) {
                emit(Gate::h(q));  // I = H^2
                emit(Gate::h(q));
            }
        }
        emit(g);
        for (Qubit q : g.qubits) state[static_cast<std::size_t>(q)] = WireState::Dirty;
    }

    for (std::size_t w = 0; w < n; ++w) {
        const auto q = static_cast<Qubit>(w);
        if (style == Style::Qaoa) {
            // I = Htilde Htilde^dagger with Htilde^dagger = H e^{i pi Z/4} H; on a
            // fresh wire the first H is absorbed into |+>.
            if (state[w] != WireState::Fresh) emit(Gate::h(q));
            emit(endpoint_phase(q));
            emit(Gate::h(q));
            emit(Gate::xrot(q, kQuarterPi));
        } else if (state[w] == WireState::Fresh) {
            emit(Gate::h(q));  // |0> = H|+>, and that H is the wall
            out.walls.insert(c.gates.size() - 1);
        } else if (trailing_h[w] >= 0) {
            out.walls.insert(static_cast<std::size_t>(trailing_h[w]));
        } else {
            emit(Gate::h(q));  // I = H^2
            emit(Gate::h(q));
            out.walls.insert(c.gates.size() - 1);
        }
    }
    return out;
}

/// At most one diagonal gate between consecutive Hadamards (|+> counts as
/// one), and nothing after the final mixer or wall.
void check_separated(const Circuit& c, Style style, const std::set<std::size_t>& walls) {
    const auto n = static_cast<std::size_t>(c.n_qubits);
    std::vector<int> diagonals(n, 0);
    std::vector<bool> finished(n, false);
    for (std::size_t w = 0; w < n; ++w) {
        if (c.prep[w] != Prep::Plus) {
            throw Error(ErrorCode::InvariantViolated, "wire " + std::to_string(w) + " does not start in |+>");
        }
    }
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        for (Qubit q : g.qubits) {
            if (finished[static_cast<std::size_t>(q)]) {
                throw Error(ErrorCode::InvariantViolated,
                            "gate " + std::to_string(i) + " follows the final rotation on qubit " + std::to_string(q));
            }
        }
        if (std::holds_alternative<H>(g.kind)) {
            const auto w = static_cast<std::size_t>(g.qubits[0]);
            diagonals[w] = 0;
            if (style == Style::Iqp && walls.count(i) != 0) finished[w] = true;
        } else if (std::holds_alternative<XRot>(g.kind)) {
            if (style == Style::Iqp) {
                throw Error(ErrorCode::InvariantViolated, "XRot in an IQP circuit");
            }
            finished[static_cast<std::size_t>(g.qubits[0])] = true;
        } else {
            for (Qubit q : g.qubits) {
                if (++diagonals[static_cast<std::size_t>(q)] > 1) {
                    throw Error(ErrorCode::InvariantViolated,
                                "two diagonal gates meet on wire " + std::to_string(q) + " at gate " +
                                    std::to_string(i) + " without a separating H");
                }
            }
        }
    }
    for (std::size_t w = 0; w < n; ++w) {
        if (!finished[w]) {
            throw Error(ErrorCode::InvariantViolated,
                        "wire " + std::to_string(w) + (style == Style::Qaoa ? " lacks its final XRot" : " lacks its wall H"));
        }
    }
}

std::pair<Circuit, WireChain> substitute_impl(const Circuit& pre, Style style, const std::set<std::size_t>& walls) {
    check_separated(pre, style, walls);
    const int n = pre.n_qubits;
    Circuit out;
    out.n_qubits = n;
    out.prep.assign(static_cast<std::size_t>(n), Prep::Plus);
    WireChain chains;
    std::vector<Qubit> cursor(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
        cursor[static_cast<std::size_t>(w)] = w;
        chains.chain[w] = {w};
        chains.couplings[w] = {};
    }
    for (std::size_t i = 0; i < pre.gates.size(); ++i) {
        Gate g = pre.gates[i];
        const bool is_h = std::holds_alternative<H>(g.kind);
        if (is_h && !(style == Style::Iqp && walls.count(i) != 0)) {
            const int w = g.qubits[0];
            const Qubit j = cursor[static_cast<std::size_t>(w)];
            const Qubit a = out.n_qubits++;
            out.prep.push_back(Prep::Plus);
            chains.couplings[w].push_back(out.gates.size());
            if (style == Style::Qaoa) {
                out.gates.push_back(coupling(a, j));
                out.gates.push_back(Gate::xrot(j, kQuarterPi));
            } else {
                out.gates.push_back(Gate::cz(a, j));
                out.gates.push_back(Gate::h(j));
            }
            out.post_select.insert(j);
            out.post_select_at[j] = out.gates.size();
            cursor[static_cast<std::size_t>(w)] = a;
            chains.chain[w].push_back(a);
            continue;
        }
        for (Qubit& q : g.qubits) q = cursor[static_cast<std::size_t>(q)];
        out.gates.push_back(std::move(g));
    }
    for (const auto& [wire, q] : pre.effective_output_map()) {
        out.output_map[wire] = cursor[static_cast<std::size_t>(q)];
    }
    return {std::move(out), std::move(chains)};
}

Term term_of(const Gate& g) {
    Term t;
    t.support = g.qubits;
    for (int d : g.phase_residues()) t.table.push_back(d);
    return t;
}

void fill_report(CompileReport* report, const Circuit& source, const CostFunction& cost, int n_total,
                 const std::set<Qubit>& post_select, WireChain chains) {
    if (report == nullptr) return;
    report->source_qubits = source.n_qubits;
    report->auxiliary_qubits = n_total - source.n_qubits;
    report->post_selected = static_cast<int>(post_select.size());
    InteractionGraph g = interaction_graph(cost);
    report->interaction_degree = g.max_degree;
    report->degree_histogram.clear();
    for (int d : g.degrees()) ++report->degree_histogram[d];
    report->chains = std::move(chains);
}

}  // namespace

SingleQubitUnitary SingleQubitUnitary::hadamard() {
    const Cyclotomic h = Cyclotomic::inv_sqrt2();
    SingleQubitUnitary u;
    u.exact = std::array<Cyclotomic, 4>{h, h, h, -h};
    for (std::size_t i = 0; i < 4; ++i) u.entries[i] = (*u.exact)[i].to_complex();
    return u;
}

SingleQubitUnitary SingleQubitUnitary::tdg() {
    SingleQubitUnitary u;
    u.exact = std::array<Cyclotomic, 4>{Cyclotomic(1), Cyclotomic(0), Cyclotomic(0), Cyclotomic::root_power(-1)};
    for (std::size_t i = 0; i < 4; ++i) u.entries[i] = (*u.exact)[i].to_complex();
    return u;
}

SingleQubitUnitary SingleQubitUnitary::xrot(double angle) {
    SingleQubitUnitary u;
    int m = 0;
    if (quarter_pi_multiple(angle, &m)) {
        // cos and sin of m pi/4 lie in {0, +-1, +-1/sqrt2}
        auto value = [](double x) {
            const double s = x * std::sqrt(2.0);
            if (std::abs(x - std::round(x)) < 1e-9) return Cyclotomic(static_cast<std::int64_t>(std::lround(x)));
            return Cyclotomic::inv_sqrt2().scaled(Rational(static_cast<std::int64_t>(std::lround(s))));
        };
        const double theta = m * kQuarterPi;
        Cyclotomic c = value(std::cos(theta));
        Cyclotomic s = value(std::sin(theta)).times_root(6);  // -i sin
        u.exact = std::array<Cyclotomic, 4>{c, s, s, c};
        for (std::size_t i = 0; i < 4; ++i) u.entries[i] = (*u.exact)[i].to_complex();
        return u;
    }
    const Complex c(std::cos(angle), 0.0);
    const Complex s(0.0, -std::sin(angle));
    u.entries = {c, s, s, c};
    return u;
}

SingleQubitUnitary SingleQubitUnitary::from_complex(const std::array<Complex, 4>& m) {
    SingleQubitUnitary u;
    u.entries = m;
    return u;
}

SingleQubitUnitary SingleQubitUnitary::named(const std::string& name) {
    if (name == "H") return hadamard();
    if (name == "Htilde") return xrot(kQuarterPi);
    if (name == "Tdg") return tdg();
    if (name == "X") {
        SingleQubitUnitary u;
        u.exact = std::array<Cyclotomic, 4>{Cyclotomic(0), Cyclotomic(1), Cyclotomic(1), Cyclotomic(0)};
        u.entries = {0.0, 1.0, 1.0, 0.0};
        return u;
    }
    if (name == "I") {
        SingleQubitUnitary u;
        u.exact = std::array<Cyclotomic, 4>{Cyclotomic(1), Cyclotomic(0), Cyclotomic(0), Cyclotomic(1)};
        u.entries = {1.0, 0.0, 0.0, 1.0};
        return u;
    }
    if (name.rfind("xrot:", 0) == 0) {
        std::size_t used = 0;
        double angle = 0.0;
        try {
            angle = std::stod(name.substr(5), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != name.size() - 5) {
            throw Error(ErrorCode::InvalidInput, "bad rotation angle in '" + name + "'");
        }
        return xrot(angle);
    }
    throw Error(ErrorCode::InvalidInput, "unknown gate name '" + name + "'");
}

GadgetSpec gadget_solve(const SingleQubitUnitary& f, double lambda_phase) {
    GadgetSpec spec;
    spec.f = f;
    spec.r0 = f.entries[0];
    spec.r1 = f.entries[1];

    int phase_steps = 0;
    bool exact_path = f.exact.has_value() && quarter_pi_multiple(lambda_phase, &phase_steps);
    std::optional<QuadraticReal> exact_abs;
    if (f.exact) {
        const Cyclotomic& r0 = (*f.exact)[0];
        const Cyclotomic& r1 = (*f.exact)[1];
        if (r0.is_zero() || r1.is_zero()) {
            throw Error(ErrorCode::ZeroMatrixElement, "r0 * r1 = 0");
        }
        if (!(norm_squared(r0) == norm_squared(r1))) {
            throw Error(ErrorCode::NoUnitaryW, "|r0| != |r1|");
        }
        exact_abs = norm_squared(r0).sqrt();
        exact_path = exact_path && exact_abs.has_value();
    } else {
        if (std::abs(spec.r0) < kFloatTolerance || std::abs(spec.r1) < kFloatTolerance) {
            throw Error(ErrorCode::ZeroMatrixElement, "r0 * r1 = 0");
        }
        if (std::abs(std::abs(spec.r0) - std::abs(spec.r1)) > kFloatTolerance) {
            throw Error(ErrorCode::NoUnitaryW, "|r0| != |r1|");
        }
    }

    if (exact_path) {
        const std::array<Cyclotomic, 2> r{(*f.exact)[0], (*f.exact)[1]};
        Cyclotomic lambda = exact_abs->to_cyclotomic().times_root(phase_steps);
        std::array<Cyclotomic, 4> w;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                // lambda (-1)^(ab) / r_b = lambda (-1)^(ab) conj(r_b) / |r_b|^2
                const auto ub = static_cast<std::size_t>(b);
                Cyclotomic v = lambda * r[ub].conj() * norm_squared(r[ub]).inverse().to_cyclotomic();
                w[static_cast<std::size_t>(2 * a + b)] = (a * b == 1) ? -v : v;
            }
        }
        spec.exact_r = r;
        spec.exact_lambda = lambda;
        spec.exact_w = w;
        spec.lambda = lambda.to_complex();
        for (std::size_t i = 0; i < 4; ++i) spec.w[i] = w[i].to_complex();
        return spec;
    }

    spec.lambda = std::polar(std::abs(spec.r0), lambda_phase);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const Complex rb = b == 0 ? spec.r0 : spec.r1;
            spec.w[static_cast<std::size_t>(2 * a + b)] = spec.lambda * ((a * b == 1) ? -1.0 : 1.0) / rb;
        }
    }
    return spec;
}

Circuit preprocess(const Circuit& circuit) { return preprocess_impl(circuit, Style::Qaoa).circuit; }

std::pair<Circuit, WireChain> hadamard_substitute(const Circuit& preprocessed) {
    return substitute_impl(preprocessed, Style::Qaoa, {});
}

QaoaInstance collect_phases(const Circuit& substituted) {
    const auto n = static_cast<std::size_t>(substituted.n_qubits);
    std::vector<int> mixers(n, 0);
    QaoaInstance inst;
    inst.n = substituted.n_qubits;
    inst.p = 1;
    inst.gammas = {kQuarterPi};
    inst.betas = {kQuarterPi};
    inst.cost.n_vars = inst.n;
    inst.cost.integer_valued = true;
    for (std::size_t i = 0; i < substituted.gates.size(); ++i) {
        const Gate& g = substituted.gates[i];
        const std::string where = "gate " + std::to_string(i) + " (" + g.name() + ")";
        if (const auto* x = std::get_if<XRot>(&g.kind)) {
            if (std::abs(x->angle - kQuarterPi) > kFloatTolerance) {
                throw Error(ErrorCode::NonDiagonalResidue, where + " is not XRot(pi/4)");
            }
            if (++mixers[static_cast<std::size_t>(g.qubits[0])] > 1) {
                throw Error(ErrorCode::NonDiagonalResidue, where + " is a second mixer on its qubit");
            }
            continue;
        }
        if (std::holds_alternative<H>(g.kind) || std::holds_alternative<GeneralDiag1>(g.kind) ||
            std::holds_alternative<GeneralDiag2>(g.kind)) {
            throw Error(ErrorCode::NonDiagonalResidue, where + " cannot join an integer phase layer");
        }
        for (Qubit q : g.qubits) {
            if (mixers[static_cast<std::size_t>(q)] != 0) {
                throw Error(ErrorCode::NonDiagonalResidue, where + " follows the mixer on qubit " + std::to_string(q));
            }
        }
        inst.cost.terms.push_back(term_of(g));
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (mixers[q] != 1) {
            throw Error(ErrorCode::NonDiagonalResidue, "qubit " + std::to_string(q) + " lacks its trailing XRot(pi/4)");
        }
        if (substituted.prep[q] != Prep::Plus) {
            throw Error(ErrorCode::NonDiagonalResidue, "qubit " + std::to_string(q) + " is not prepared in |+>");
        }
    }
    inst.post_select = substituted.post_select;
    inst.output_map = substituted.effective_output_map();
    return inst;
}

CostFunction make_monotone(const CostFunction& cost) {
    if (!cost.integer_valued) {
        throw Error(ErrorCode::NotIntegerValued, "make_monotone needs integer tables");
    }
    cost.check();
    // Least value >= floor that is congruent to v mod 8.
    auto lift = [](long long v, long long floor) {
        long long r = ((v - floor) % 8 + 8) % 8;
        return floor + r;
    };
    CostFunction out = cost;
    for (Term& t : out.terms) {
        std::vector<long long> v;
        for (double x : t.table) v.push_back(std::llround(x));
        v[0] = lift(v[0], 0);
        if (t.support.size() == 1) {
            v[1] = lift(v[1], v[0]);
        } else {
            v[1] = lift(v[1], v[0]);
            v[2] = lift(v[2], v[0]);
            v[3] = lift(v[3], std::max(v[1], v[2]));
        }
        for (std::size_t i = 0; i < v.size(); ++i) t.table[i] = static_cast<double>(v[i]);
    }
    return out;
}

QaoaInstance compile(const Circuit& circuit, bool monotone, CompileReport* report) {
    Preprocessed pre = preprocess_impl(circuit, Style::Qaoa);
    auto [substituted, chains] = substitute_impl(pre.circuit, Style::Qaoa, {});
    QaoaInstance inst = collect_phases(substituted);
    if (monotone) inst.cost = make_monotone(inst.cost);
    fill_report(report, circuit, inst.cost, inst.n, inst.post_select, std::move(chains));
    return inst;
}

Circuit IqpInstance::to_circuit() const {
    Circuit c = Circuit::pluses(n);
    for (const Term& t : cost.terms) {
        std::vector<int> d;
        for (double x : t.table) d.push_back(static_cast<int>(((std::llround(x) % 8) + 8) % 8));
        c.gates.push_back(t.support.size() == 1 ? Gate::phase1(t.support[0], d[0], d[1])
                                                : Gate::phase2(t.support[0], t.support[1], d[0], d[1], d[2], d[3]));
    }
    for (Qubit q = 0; q < n; ++q) c.gates.push_back(Gate::h(q));
    c.post_select = post_select;
    c.output_map = output_map;
    return c;
}

IqpInstance compile_iqp(const Circuit& circuit, bool monotone, CompileReport* report) {
    Preprocessed pre = preprocess_impl(circuit, Style::Iqp);
    auto [substituted, chains] = substitute_impl(pre.circuit, Style::Iqp, pre.walls);
    IqpInstance inst;
    inst.n = substituted.n_qubits;
    inst.cost.n_vars = inst.n;
    inst.cost.integer_valued = true;
    for (const Gate& g : substituted.gates) {
        if (g.is_diagonal()) inst.cost.terms.push_back(term_of(g));
    }
    inst.post_select = substituted.post_select;
    inst.output_map = substituted.effective_output_map();
    if (monotone) inst.cost = make_monotone(inst.cost);
    fill_report(report, circuit, inst.cost, inst.n, inst.post_select, std::move(chains));
    return inst;
}

}  // namespace qdich
