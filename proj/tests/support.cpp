#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdich::testing {

namespace {

using Complex = std::complex<double>;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<double> random_table(Rng& rng, std::size_t size) {
    std::vector<double> t(size);
    for (double& x : t) x = uniform(rng, -2.0, 2.0);
    return t;
}

void random_parameters(Rng& rng, QaoaInstance& inst) {
    for (int l = 0; l < inst.p; ++l) {
        inst.gammas.push_back(uniform(rng, 0.0, 2.0 * std::numbers::pi));
        inst.betas.push_back(uniform(rng, 0.0, 2.0 * std::numbers::pi));
    }
}

int bit_of(std::uint64_t z, int n, int q) { return static_cast<int>((z >> (n - 1 - q)) & 1U); }

void apply_1q(std::vector<Complex>& psi, int n, int q, const std::array<Complex, 4>& m) {
    const std::uint64_t stride = std::uint64_t{1} << (n - 1 - q);
    for (std::uint64_t x = 0; x < psi.size(); ++x) {
        if ((x & stride) != 0) continue;
        const Complex a0 = psi[x];
        const Complex a1 = psi[x | stride];
        psi[x] = m[0] * a0 + m[1] * a1;
        psi[x | stride] = m[2] * a0 + m[3] * a1;
    }
}

std::array<Complex, 4> xrot_matrix(double angle) {
    const Complex c(std::cos(angle), 0.0);
    const Complex s(0.0, -std::sin(angle));
    return {c, s, s, c};
}

Complex eighth_root(int d) { return std::polar(1.0, -std::numbers::pi * d / 4.0); }

}  // namespace

Circuit random_source_circuit(Rng& rng, int n, int gates) {
    Circuit c = Circuit::zeros(n);
    for (int i = 0; i < gates; ++i) {
        const int kind = uniform_int(rng, 0, n > 1 ? 2 : 1);
        const int q = uniform_int(rng, 0, n - 1);
        if (kind == 0) {
            c.gates.push_back(Gate::h(q));
        } else if (kind == 1) {
            c.gates.push_back(Gate::tdg(q));
        } else {
            int r = uniform_int(rng, 0, n - 2);
            if (r >= q) ++r;
            c.gates.push_back(Gate::cz(q, r));
        }
    }
    return c;
}

std::vector<Circuit> exhaustive_circuits(int n, int max_gates) {
    std::vector<Gate> alphabet;
    for (int q = 0; q < n; ++q) {
        alphabet.push_back(Gate::h(q));
        alphabet.push_back(Gate::tdg(q));
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) alphabet.push_back(Gate::cz(a, b));
    }
    std::vector<Circuit> out{Circuit::zeros(n)};
    std::size_t begin = 0;
    for (int len = 1; len <= max_gates; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (const Gate& g : alphabet) {
                Circuit c = out[i];
                c.gates.push_back(g);
                out.push_back(std::move(c));
            }
        }
        begin = end;
    }
    return out;
}

QaoaInstance random_degree2_instance(Rng& rng, int n, int p) {
    QaoaInstance inst;
    inst.n = n;
    inst.p = p;
    inst.cost.n_vars = n;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    auto add_edge = [&](int u, int v) {
        const int copies = uniform(rng, 0.0, 1.0) < 0.25 ? 2 : 1;
        for (int c = 0; c < copies; ++c) {
            if (uniform(rng, 0.0, 1.0) < 0.5) std::swap(u, v);
            inst.cost.terms.push_back({{u, v}, random_table(rng, 4)});
        }
    };
    int pos = 0;
    while (pos < n) {
        const int len = uniform_int(rng, 1, std::min(n - pos, 6));
        const bool cycle = len >= 3 && uniform(rng, 0.0, 1.0) < 0.5;
        for (int i = 0; i + 1 < len; ++i) {
            add_edge(perm[static_cast<std::size_t>(pos + i)], perm[static_cast<std::size_t>(pos + i + 1)]);
        }
        if (cycle) add_edge(perm[static_cast<std::size_t>(pos + len - 1)], perm[static_cast<std::size_t>(pos)]);
        pos += len;
    }
    for (int v = 0; v < n; ++v) {
        if (uniform(rng, 0.0, 1.0) < 0.5) inst.cost.terms.push_back({{v}, random_table(rng, 2)});
    }
    if (n >= 2 && uniform(rng, 0.0, 1.0) < 0.3) {
        // Depends only on its second variable, so it adds no edge.
        const int a = uniform_int(rng, 0, n - 1);
        int b = uniform_int(rng, 0, n - 2);
        if (b >= a) ++b;
        const double x = uniform(rng, -2.0, 2.0);
        const double y = uniform(rng, -2.0, 2.0);
        inst.cost.terms.push_back({{a, b}, {x, y, x, y}});
    }
    random_parameters(rng, inst);
    return inst;
}

namespace {

QaoaInstance chain_instance(Rng& rng, int n, int p, bool cycle) {
    QaoaInstance inst;
    inst.n = n;
    inst.p = p;
    inst.cost.n_vars = n;
    for (int i = 0; i + 1 < n; ++i) inst.cost.terms.push_back({{i, i + 1}, random_table(rng, 4)});
    if (cycle) inst.cost.terms.push_back({{n - 1, 0}, random_table(rng, 4)});
    for (int v = 0; v < n; ++v) inst.cost.terms.push_back({{v}, random_table(rng, 2)});
    random_parameters(rng, inst);
    return inst;
}

}  // namespace

QaoaInstance path_instance(Rng& rng, int n, int p) { return chain_instance(rng, n, p, false); }

QaoaInstance cycle_instance(Rng& rng, int n, int p) { return chain_instance(rng, n, p, true); }

QaoaInstance structural_instance(int n, int p, bool cycle) {
    QaoaInstance inst;
    inst.n = n;
    inst.p = p;
    inst.cost.n_vars = n;
    inst.cost.integer_valued = true;
    for (int i = 0; i + 1 < n; ++i) inst.cost.terms.push_back({{i, i + 1}, {0, 0, 0, 1}});
    if (cycle) inst.cost.terms.push_back({{0, n - 1}, {0, 0, 0, 1}});
    inst.gammas.assign(static_cast<std::size_t>(p), 0.3);
    inst.betas.assign(static_cast<std::size_t>(p), 0.3);
    return inst;
}

std::vector<Complex> dense_state(const Circuit& circuit) {
    const int n = circuit.n_qubits;
    std::vector<Complex> psi(std::size_t{1} << n, 0.0);
    psi[0] = 1.0;
    const double r = std::sqrt(0.5);
    const std::array<Complex, 4> h{r, r, r, -r};
    for (int q = 0; q < n; ++q) {
        if (circuit.prep[static_cast<std::size_t>(q)] == Prep::Plus) apply_1q(psi, n, q, h);
    }
    for (const Gate& g : circuit.gates) {
        const int q0 = g.qubits[0];
        if (std::holds_alternative<H>(g.kind)) {
            apply_1q(psi, n, q0, h);
            continue;
        }
        if (const auto* x = std::get_if<XRot>(&g.kind)) {
            apply_1q(psi, n, q0, xrot_matrix(x->angle));
            continue;
        }
        std::vector<Complex> diag;
        if (std::holds_alternative<Tdg>(g.kind)) {
            diag = {1.0, eighth_root(1)};
        } else if (std::holds_alternative<CZ>(g.kind)) {
            diag = {1.0, 1.0, 1.0, -1.0};
        } else if (const auto* d1 = std::get_if<PhaseDiag1>(&g.kind)) {
            for (int d : d1->entries) diag.push_back(eighth_root(d));
        } else if (const auto* d2 = std::get_if<PhaseDiag2>(&g.kind)) {
            for (int d : d2->entries) diag.push_back(eighth_root(d));
        } else if (const auto* g1 = std::get_if<GeneralDiag1>(&g.kind)) {
            diag.assign(g1->entries.begin(), g1->entries.end());
        } else if (const auto* g2 = std::get_if<GeneralDiag2>(&g.kind)) {
            diag.assign(g2->entries.begin(), g2->entries.end());
        } else {
            throw std::logic_error("dense_state: unknown gate");
        }
        for (std::uint64_t z = 0; z < psi.size(); ++z) {
            std::size_t idx = static_cast<std::size_t>(bit_of(z, n, q0));
            if (g.qubits.size() == 2) idx = 2 * idx + static_cast<std::size_t>(bit_of(z, n, g.qubits[1]));
            psi[z] *= diag[idx];
        }
    }
    return psi;
}

std::vector<double> qaoa_probabilities(const QaoaInstance& inst) {
    if (!inst.post_select.empty()) throw std::logic_error("qaoa_probabilities: post-selection not supported");
    const int n = inst.n;
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> cost(dim, 0.0);
    for (std::uint64_t z = 0; z < dim; ++z) {
        for (const Term& t : inst.cost.terms) {
            std::size_t idx = static_cast<std::size_t>(bit_of(z, n, t.support[0]));
            if (t.support.size() == 2) idx = 2 * idx + static_cast<std::size_t>(bit_of(z, n, t.support[1]));
            cost[z] += t.table[idx];
        }
    }
    std::vector<Complex> psi(dim, Complex(std::pow(2.0, -0.5 * n), 0.0));
    for (int l = 0; l < inst.p; ++l) {
        for (std::uint64_t z = 0; z < dim; ++z) psi[z] *= std::polar(1.0, -inst.gammas[static_cast<std::size_t>(l)] * cost[z]);
        const auto m = xrot_matrix(inst.betas[static_cast<std::size_t>(l)]);
        for (int q = 0; q < n; ++q) apply_1q(psi, n, q, m);
    }
    std::vector<double> probs(dim);
    for (std::size_t z = 0; z < dim; ++z) probs[z] = std::norm(psi[z]);
    return probs;
}

double brute_marginal(const std::vector<double>& probs, int n, const std::vector<int>& subset,
                      const std::vector<int>& outcome) {
    double total = 0.0;
    for (std::uint64_t z = 0; z < probs.size(); ++z) {
        bool ok = true;
        for (std::size_t i = 0; i < subset.size() && ok; ++i) ok = bit_of(z, n, subset[i]) == outcome[i];
        if (ok) total += probs[z];
    }
    return total;
}

}  // namespace qdich::testing
