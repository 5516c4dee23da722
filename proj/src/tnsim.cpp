#include "qdich/tnsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>

#include "qdich/error.hpp"

namespace qdich {

namespace {

using Complex = std::complex<double>;
using Tensor = std::vector<Complex>;
using Table2 = std::array<double, 2>;
using Table4 = std::array<double, 4>;  // f(left, right) at 2*left + right

// Beyond this many stored environment entries the cycle sampler falls back to
// one sweep per conditional.
constexpr std::size_t kMaxEnvironmentEntries = std::size_t{1} << 24;

/// Everything the contraction needs about one component. Position i of
/// `order` carries local[i]; edge[i] joins positions i and i + 1, and for a
/// cycle `wrap` joins the last position to the first.
struct ChainModel {
    ComponentKind kind = ComponentKind::Isolated;
    std::vector<int> order;
    std::vector<Table2> local;
    std::vector<Table4> edge;
    Table4 wrap{};
};

struct Layers {
    int p = 0;
    std::vector<double> gammas;
    std::vector<double> betas;

    std::size_t half() const { return std::size_t{1} << p; }  // 2^p
    std::size_t dim() const { return half() * half(); }      // 4^p
};

/// Applies a 2x2 map (row-major, out x in) to one bit of every index.
void apply_bit(Tensor& v, std::size_t bit, const std::array<Complex, 4>& g) {
    const std::size_t stride = std::size_t{1} << bit;
    for (std::size_t x = 0; x < v.size(); ++x) {
        if ((x & stride) != 0) continue;
        const Complex a0 = v[x];
        const Complex a1 = v[x | stride];
        v[x] = g[0] * a0 + g[1] * a1;
        v[x | stride] = g[2] * a0 + g[3] * a1;
    }
}

/// Doubled index = ket * 2^p + bra, so ket layer l sits at bit p + l and bra
/// layer l at bit l. forward maps left-vertex indices to right-vertex ones;
/// otherwise right to left.
void apply_edge(Tensor& v, const Layers& layers, const Table4& f, bool forward) {
    for (int l = 0; l < layers.p; ++l) {
        const double gamma = layers.gammas[static_cast<std::size_t>(l)];
        auto g = [&](int a, int b) { return std::polar(1.0, -gamma * f[static_cast<std::size_t>(2 * a + b)]); };
        std::array<Complex, 4> m = forward ? std::array<Complex, 4>{g(0, 0), g(1, 0), g(0, 1), g(1, 1)}
                                           : std::array<Complex, 4>{g(0, 0), g(0, 1), g(1, 0), g(1, 1)};
        std::array<Complex, 4> mc{std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
        apply_bit(v, static_cast<std::size_t>(layers.p + l), m);
        apply_bit(v, static_cast<std::size_t>(l), mc);
    }
}

/// Single-vertex amplitude A(s, x): |+>, then per layer the 1-local phase at
/// s_l followed by exp(-i beta_l X) into s_{l+1} (or the outcome x).
std::vector<std::array<Complex, 2>> vertex_amplitudes(const Layers& layers, const Table2& h) {
    std::vector<std::array<Complex, 2>> amp(layers.half());
    const double r = std::sqrt(0.5);
    for (std::size_t s = 0; s < layers.half(); ++s) {
        for (int x = 0; x < 2; ++x) {
            Complex a(r, 0.0);
            for (int l = 0; l < layers.p; ++l) {
                const int bit = static_cast<int>((s >> l) & 1U);
                const int next = (l + 1 < layers.p) ? static_cast<int>((s >> (l + 1)) & 1U) : x;
                const double beta = layers.betas[static_cast<std::size_t>(l)];
                a *= std::polar(1.0, -layers.gammas[static_cast<std::size_t>(l)] * h[static_cast<std::size_t>(bit)]);
                a *= (bit == next) ? Complex(std::cos(beta), 0.0) : Complex(0.0, -std::sin(beta));
            }
            amp[s][static_cast<std::size_t>(x)] = a;
        }
    }
    return amp;
}

/// Doubled local tensor sum_x A(s, x) conj(A(s', x)) over the allowed x
/// (constraint -1 allows both).
Tensor local_tensor(const Layers& layers, const Table2& h, int constraint) {
    const auto amp = vertex_amplitudes(layers, h);
    const std::size_t half = layers.half();
    Tensor t(layers.dim());
    for (std::size_t s = 0; s < half; ++s) {
        for (std::size_t sp = 0; sp < half; ++sp) {
            Complex acc = 0.0;
            for (int x = 0; x < 2; ++x) {
                if (constraint >= 0 && x != constraint) continue;
                acc += amp[s][static_cast<std::size_t>(x)] * std::conj(amp[sp][static_cast<std::size_t>(x)]);
            }
            t[s * half + sp] = acc;
        }
    }
    return t;
}

/// Outcome distribution of an isolated vertex: a two-dimensional evolution.
std::array<double, 2> isolated_distribution(const Layers& layers, const Table2& h) {
    std::array<Complex, 2> psi{std::sqrt(0.5), std::sqrt(0.5)};
    for (int l = 0; l < layers.p; ++l) {
        const double gamma = layers.gammas[static_cast<std::size_t>(l)];
        const double beta = layers.betas[static_cast<std::size_t>(l)];
        psi[0] *= std::polar(1.0, -gamma * h[0]);
        psi[1] *= std::polar(1.0, -gamma * h[1]);
        const Complex c(std::cos(beta), 0.0);
        const Complex s(0.0, -std::sin(beta));
        psi = {c * psi[0] + s * psi[1], s * psi[0] + c * psi[1]};
    }
    return {std::norm(psi[0]), std::norm(psi[1])};
}

Complex dot(const Tensor& a, const Tensor& b) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

void multiply_blocks(Tensor& v, const Tensor& local) {
    const std::size_t d = local.size();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= local[i % d];
}

int constraint_at(const Constraints& c, int vertex) {
    auto it = c.find(vertex);
    return it == c.end() ? -1 : it->second;
}

/// Marginal of a path or cycle by a left-to-right sweep. A cycle holds the
/// first vertex's doubled index b open and closes the wrap edge at the end.
double sweep_marginal(const ChainModel& m, const Layers& layers, const Constraints& c) {
    const std::size_t k = m.order.size();
    std::vector<Tensor> locals;
    locals.reserve(k);
    for (std::size_t i = 0; i < k; ++i) locals.push_back(local_tensor(layers, m.local[i], constraint_at(c, m.order[i])));

    auto sweep = [&](Tensor msg) {
        for (std::size_t i = 1; i < k; ++i) {
            apply_edge(msg, layers, m.edge[i - 1], true);
            multiply_blocks(msg, locals[i]);
        }
        return msg;
    };
    if (m.kind == ComponentKind::Path) {
        Tensor last = sweep(locals[0]);
        Complex total = 0.0;
        for (const Complex& x : last) total += x;
        return total.real();
    }
    const std::size_t d = layers.dim();
    Complex total = 0.0;
    for (std::size_t b = 0; b < d; ++b) {
        if (locals[0][b] == Complex(0.0)) continue;
        Tensor start(d);
        start[b] = locals[0][b];
        Tensor last = sweep(std::move(start));
        Tensor closure(d);
        closure[b] = 1.0;
        apply_edge(closure, layers, m.wrap, false);
        total += dot(last, closure);
    }
    return total.real();
}

Table4 oriented(const Table4& t, bool swap) {
    return swap ? Table4{t[0], t[2], t[1], t[3]} : t;
}

}  // namespace

std::string to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Isolated: return "isolated";
        case ComponentKind::Path: return "path";
        case ComponentKind::Cycle: return "cycle";
    }
    return "unknown";
}

std::vector<Component> decompose(const InteractionGraph& graph) {
    const auto adj = graph.adjacency();
    for (int v = 0; v < graph.n; ++v) {
        if (adj[static_cast<std::size_t>(v)].size() > 2) {
            throw Error(ErrorCode::DegreeTooHigh, "vertex " + std::to_string(v) + " has degree " +
                                                      std::to_string(adj[static_cast<std::size_t>(v)].size()));
        }
    }
    std::vector<bool> seen(static_cast<std::size_t>(graph.n), false);
    std::vector<Component> out;
    for (int root = 0; root < graph.n; ++root) {
        if (seen[static_cast<std::size_t>(root)]) continue;
        std::vector<int> members{root};
        seen[static_cast<std::size_t>(root)] = true;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (int u : adj[static_cast<std::size_t>(members[i])]) {
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = true;
                    members.push_back(u);
                }
            }
        }
        std::size_t edge_count = 0;
        for (int v : members) edge_count += adj[static_cast<std::size_t>(v)].size();
        edge_count /= 2;

        Component comp;
        if (members.size() == 1) {
            comp.kind = ComponentKind::Isolated;
            comp.vertices = members;
            out.push_back(std::move(comp));
            continue;
        }
        comp.kind = edge_count == members.size() ? ComponentKind::Cycle : ComponentKind::Path;
        int start = *std::min_element(members.begin(), members.end());
        if (comp.kind == ComponentKind::Path) {
            start = graph.n;
            for (int v : members) {
                if (adj[static_cast<std::size_t>(v)].size() == 1) start = std::min(start, v);
            }
        }
        // Walk; for a cycle adjacency is sorted so the first step goes to
        // the lower-indexed neighbour.
        int prev = -1;
        int cur = start;
        while (true) {
            comp.vertices.push_back(cur);
            int next = -1;
            for (int u : adj[static_cast<std::size_t>(cur)]) {
                if (u != prev && u != start) {
                    next = u;
                    break;
                }
            }
            if (next < 0) break;
            prev = cur;
            cur = next;
        }
        for (std::size_t i = 0; i + 1 < comp.vertices.size(); ++i) {
            comp.edges.emplace_back(comp.vertices[i], comp.vertices[i + 1]);
        }
        if (comp.kind == ComponentKind::Cycle) comp.edges.emplace_back(comp.vertices.back(), comp.vertices.front());
        out.push_back(std::move(comp));
    }
    return out;
}

CutProfile cut_width(const QaoaInstance& instance, const std::vector<int>& ordering) {
    instance.check();
    const int n = instance.n;
    CutProfile prof;
    prof.ordering = ordering;
    if (prof.ordering.empty()) {
        for (int v = 0; v < n; ++v) prof.ordering.push_back(v);
    }
    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    if (prof.ordering.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::InvalidInput, "ordering must list every qubit once");
    }
    for (std::size_t i = 0; i < prof.ordering.size(); ++i) {
        const int v = prof.ordering[i];
        if (v < 0 || v >= n || pos[static_cast<std::size_t>(v)] >= 0) {
            throw Error(ErrorCode::InvalidInput, "ordering must list every qubit once");
        }
        pos[static_cast<std::size_t>(v)] = static_cast<int>(i) + 1;
    }
    const auto cuts = static_cast<std::size_t>(std::max(n - 1, 0));
    prof.edge_crossings.assign(cuts, 0);
    prof.gate_crossings.assign(cuts, 0);
    auto cross = [&](int a, int b, std::vector<int>& counts, int weight) {
        const int lo = std::min(pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)]);
        const int hi = std::max(pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)]);
        for (int i = lo; i < hi; ++i) counts[static_cast<std::size_t>(i - 1)] += weight;
    };
    for (const Term& t : instance.cost.terms) {
        if (t.support.size() == 2) cross(t.support[0], t.support[1], prof.gate_crossings, instance.p);
    }
    for (const auto& [a, b] : interaction_graph(instance.cost).edges) cross(a, b, prof.edge_crossings, 1);
    for (int x : prof.edge_crossings) prof.max_delta = std::max(prof.max_delta, x);
    for (int x : prof.gate_crossings) prof.cut_width = std::max(prof.cut_width, x);
    return prof;
}

struct DegreeTwoSimulator::Impl {
    int n = 0;
    Layers layers;
    std::vector<Component> components;
    std::vector<ChainModel> models;
    std::vector<int> component_of;  // vertex -> component index

    explicit Impl(const QaoaInstance& instance) {
        instance.check();
        if (!instance.post_select.empty()) {
            throw Error(ErrorCode::PostSelectionUnsupported, "the degree-2 simulator handles plain QAOA output only");
        }
        n = instance.n;
        layers.p = instance.p;
        layers.gammas = instance.gammas;
        layers.betas = instance.betas;
        const InteractionGraph graph = interaction_graph(instance.cost);
        components = decompose(graph);

        // Terms on the same edge merge; 2-variable terms that are not edges
        // depend on at most one variable and fold into 1-local tables.
        std::vector<Table2> local(static_cast<std::size_t>(n), Table2{0.0, 0.0});
        std::map<std::pair<int, int>, Table4> edges;
        for (const Term& t : instance.cost.terms) {
            if (t.support.size() == 1) {
                auto& h = local[static_cast<std::size_t>(t.support[0])];
                h[0] += t.table[0];
                h[1] += t.table[1];
                continue;
            }
            const int a = t.support[0];
            const int b = t.support[1];
            const bool dep_a = t.depends_on_first();
            const bool dep_b = t.depends_on_second();
            if (dep_a && dep_b) {
                const Table4 tab = oriented({t.table[0], t.table[1], t.table[2], t.table[3]}, a > b);
                auto& e = edges[{std::min(a, b), std::max(a, b)}];
                for (std::size_t i = 0; i < 4; ++i) e[i] += tab[i];
            } else if (dep_a) {
                local[static_cast<std::size_t>(a)][0] += t.table[0];
                local[static_cast<std::size_t>(a)][1] += t.table[2];
            } else if (dep_b) {
                local[static_cast<std::size_t>(b)][0] += t.table[0];
                local[static_cast<std::size_t>(b)][1] += t.table[1];
            }
            // constant terms are a global phase
        }
        auto edge_table = [&](int u, int v) { return oriented(edges.at({std::min(u, v), std::max(u, v)}), u > v); };

        component_of.assign(static_cast<std::size_t>(n), -1);
        for (std::size_t ci = 0; ci < components.size(); ++ci) {
            const Component& comp = components[ci];
            ChainModel m;
            m.kind = comp.kind;
            m.order = comp.vertices;
            for (int v : comp.vertices) {
                m.local.push_back(local[static_cast<std::size_t>(v)]);
                component_of[static_cast<std::size_t>(v)] = static_cast<int>(ci);
            }
            for (std::size_t i = 0; i + 1 < m.order.size(); ++i) m.edge.push_back(edge_table(m.order[i], m.order[i + 1]));
            if (m.kind == ComponentKind::Cycle) m.wrap = edge_table(m.order.back(), m.order.front());
            models.push_back(std::move(m));
        }
    }

    double component_probability(std::size_t ci, const Constraints& c) const {
        const ChainModel& m = models[ci];
        if (m.kind == ComponentKind::Isolated) {
            const int z = constraint_at(c, m.order[0]);
            if (z < 0) return 1.0;
            return isolated_distribution(layers, m.local[0])[static_cast<std::size_t>(z)];
        }
        return sweep_marginal(m, layers, c);
    }

    /// Chain-rule sampler for one path or cycle, with right environments
    /// precomputed once and shared by every sample.
    class ChainSampler {
    public:
        ChainSampler(const ChainModel& m, const Layers& layers) : m_(m), layers_(layers) {
            const std::size_t k = m.order.size();
            const std::size_t d = layers.dim();
            blocks_ = m.kind == ComponentKind::Cycle ? d : 1;
            for (int z = 0; z < 2; ++z) {
                for (std::size_t i = 0; i < k; ++i) fixed_[z].push_back(local_tensor(layers, m.local[i], z));
            }
            for (std::size_t i = 0; i < k; ++i) free_.push_back(local_tensor(layers, m.local[i], -1));
            use_env_ = k * blocks_ * d <= kMaxEnvironmentEntries;
            if (!use_env_) return;
            right_.resize(k);
            if (m.kind == ComponentKind::Path) {
                right_[k - 1].assign(d, 1.0);
            } else {
                Tensor r(blocks_ * d);
                for (std::size_t b = 0; b < d; ++b) r[b * d + b] = 1.0;
                apply_edge(r, layers, m.wrap, false);
                right_[k - 1] = std::move(r);
            }
            for (std::size_t i = k - 1; i > 0; --i) {
                Tensor r = right_[i];
                multiply_blocks(r, free_[i]);
                apply_edge(r, layers, m.edge[i - 1], false);
                right_[i - 1] = std::move(r);
            }
        }

        template <class Draw>
        void run(Draw&& draw, std::string& bits, std::vector<Step>& steps) const {
            const std::size_t k = m_.order.size();
            const std::size_t d = layers_.dim();
            if (!use_env_) {
                Constraints prefix;
                for (std::size_t t = 0; t < k; ++t) {
                    const int v = m_.order[t];
                    std::array<double, 2> pr{};
                    for (int z = 0; z < 2; ++z) {
                        prefix[v] = z;
                        pr[static_cast<std::size_t>(z)] = std::max(0.0, sweep_marginal(m_, layers_, prefix));
                    }
                    const int z = draw(pr);
                    prefix[v] = z;
                    record(v, z, pr, bits, steps);
                }
                return;
            }
            Tensor left;
            for (std::size_t t = 0; t < k; ++t) {
                std::array<Tensor, 2> cand;
                std::array<double, 2> pr{};
                for (int z = 0; z < 2; ++z) {
                    const Tensor& loc = fixed_[z][t];
                    if (t == 0) {
                        if (blocks_ == 1) {
                            cand[z] = loc;
                        } else {
                            cand[z].assign(blocks_ * d, 0.0);
                            for (std::size_t b = 0; b < d; ++b) cand[z][b * d + b] = loc[b];
                        }
                    } else {
                        cand[z] = left;
                        multiply_blocks(cand[z], loc);
                    }
                    pr[static_cast<std::size_t>(z)] = std::max(0.0, dot(cand[z], right_[t]).real());
                }
                const int z = draw(pr);
                record(m_.order[t], z, pr, bits, steps);
                left = std::move(cand[z]);
                if (t + 1 < k) apply_edge(left, layers_, m_.edge[t], true);
            }
        }

    private:
        static void record(int v, int z, const std::array<double, 2>& pr, std::string& bits, std::vector<Step>& steps) {
            bits[static_cast<std::size_t>(v)] = static_cast<char>('0' + z);
            steps.push_back({v, z, pr[static_cast<std::size_t>(z)] / (pr[0] + pr[1])});
        }

        const ChainModel& m_;
        const Layers& layers_;
        std::size_t blocks_ = 1;
        bool use_env_ = true;
        std::array<std::vector<Tensor>, 2> fixed_;
        std::vector<Tensor> free_;
        std::vector<Tensor> right_;
    };
};

DegreeTwoSimulator::DegreeTwoSimulator(const QaoaInstance& instance) : impl_(std::make_unique<Impl>(instance)) {}
DegreeTwoSimulator::~DegreeTwoSimulator() = default;
DegreeTwoSimulator::DegreeTwoSimulator(DegreeTwoSimulator&&) noexcept = default;
DegreeTwoSimulator& DegreeTwoSimulator::operator=(DegreeTwoSimulator&&) noexcept = default;

const std::vector<Component>& DegreeTwoSimulator::components() const { return impl_->components; }

double DegreeTwoSimulator::marginal(const std::vector<int>& subset, const std::vector<int>& outcome) const {
    if (subset.size() != outcome.size()) {
        throw Error(ErrorCode::InvalidInput, "subset and outcome lengths differ");
    }
    std::map<std::size_t, Constraints> per_component;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const int v = subset[i];
        if (v < 0 || v >= impl_->n) throw Error(ErrorCode::InvalidInput, "subset vertex " + std::to_string(v) + " out of range");
        if (outcome[i] != 0 && outcome[i] != 1) throw Error(ErrorCode::InvalidInput, "outcome bits must be 0 or 1");
        auto& c = per_component[static_cast<std::size_t>(impl_->component_of[static_cast<std::size_t>(v)])];
        if (!c.emplace(v, outcome[i]).second) {
            throw Error(ErrorCode::InvalidInput, "subset repeats vertex " + std::to_string(v));
        }
    }
    double prob = 1.0;
    for (const auto& [ci, c] : per_component) prob *= impl_->component_probability(ci, c);
    return prob;
}

std::vector<DegreeTwoSimulator::Sample> DegreeTwoSimulator::sample(std::uint64_t seed, std::size_t count) const {
    std::vector<Sample> out;
    if (count == 0) return out;
    std::vector<std::unique_ptr<Impl::ChainSampler>> samplers(impl_->models.size());
    std::vector<std::array<double, 2>> isolated(impl_->models.size());
    for (std::size_t ci = 0; ci < impl_->models.size(); ++ci) {
        const ChainModel& m = impl_->models[ci];
        if (m.kind == ComponentKind::Isolated) {
            isolated[ci] = isolated_distribution(impl_->layers, m.local[0]);
        } else {
            samplers[ci] = std::make_unique<Impl::ChainSampler>(m, impl_->layers);
        }
    }
    std::mt19937_64 rng(seed);
    auto draw = [&rng](const std::array<double, 2>& pr) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double total = pr[0] + pr[1];
        if (!(total > 0.0)) throw Error(ErrorCode::InvariantViolated, "chain-rule prefix has zero probability");
        return u * total < pr[0] ? 0 : 1;
    };
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Sample smp;
        smp.bits.assign(static_cast<std::size_t>(impl_->n), '0');
        for (std::size_t ci = 0; ci < impl_->models.size(); ++ci) {
            const ChainModel& m = impl_->models[ci];
            if (m.kind == ComponentKind::Isolated) {
                const int z = draw(isolated[ci]);
                smp.bits[static_cast<std::size_t>(m.order[0])] = static_cast<char>('0' + z);
                smp.steps.push_back({m.order[0], z, isolated[ci][static_cast<std::size_t>(z)]});
            } else {
                samplers[ci]->run(draw, smp.bits, smp.steps);
            }
        }
        out.push_back(std::move(smp));
    }
    return out;
}

double component_marginal(const Component& component, const QaoaInstance& instance, const Constraints& constraints) {
    for (const auto& [v, z] : constraints) {
        if (std::find(component.vertices.begin(), component.vertices.end(), v) == component.vertices.end()) {
            throw Error(ErrorCode::InvalidInput, "constraint on vertex " + std::to_string(v) + " outside the component");
        }
    }
    DegreeTwoSimulator sim(instance);
    const auto& comps = sim.components();
    for (const Component& c : comps) {
        if (c.vertices == component.vertices || (!c.vertices.empty() && c.vertices.front() == component.vertices.front())) {
            std::vector<int> subset;
            std::vector<int> outcome;
            for (const auto& [v, z] : constraints) {
                subset.push_back(v);
                outcome.push_back(z);
            }
            return sim.marginal(subset, outcome);
        }
    }
    throw Error(ErrorCode::InvalidInput, "component does not belong to the instance");
}

double marginal(const QaoaInstance& instance, const std::vector<int>& subset, const std::vector<int>& outcome) {
    return DegreeTwoSimulator(instance).marginal(subset, outcome);
}

std::vector<std::string> sample(const QaoaInstance& instance, std::uint64_t seed, std::size_t count) {
    std::vector<std::string> out;
    for (auto& s : DegreeTwoSimulator(instance).sample(seed, count)) out.push_back(std::move(s.bits));
    return out;
}

}  // namespace qdich
