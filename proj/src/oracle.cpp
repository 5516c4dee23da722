#include "qdich/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <type_traits>
#include <utility>

#include "qdich/error.hpp"

namespace qdich {

namespace {

using Complex = std::complex<double>;

template <class Amp>
constexpr bool kExact = std::is_same_v<Amp, Cyclotomic>;

template <class Amp>
using Prob = std::conditional_t<kExact<Amp>, QuadraticReal, double>;

/// Single-qubit dense action m / sqrt(2)^exponent, row-major.
template <class Amp>
struct Dense1 {
    std::array<Amp, 4> m;
    int sqrt2_exponent = 0;
};

[[noreturn]] void unsupported_exact(const Gate& g, const std::string& why) {
    throw Error(ErrorCode::ExactBackendUnsupportedGate, g.name() + " " + why);
}

Dense1<Complex> float_dense(const Gate& g) {
    if (std::holds_alternative<H>(g.kind)) {
        const double h = std::sqrt(0.5);
        return {{h, h, h, -h}, 0};
    }
    const double angle = std::get<XRot>(g.kind).angle;
    const Complex c(std::cos(angle), 0.0);
    const Complex s(0.0, -std::sin(angle));
    return {{c, s, s, c}, 0};
}

Dense1<Cyclotomic> exact_dense(const Gate& g) {
    if (std::holds_alternative<H>(g.kind)) {
        return {{Cyclotomic(1), Cyclotomic(1), Cyclotomic(1), Cyclotomic(-1)}, 1};
    }
    int m = 0;
    if (!quarter_pi_multiple(std::get<XRot>(g.kind).angle, &m)) {
        unsupported_exact(g, "angle is not a multiple of pi/4");
    }
    // exp(-i m pi/4 X) = cos I - i sin X. For odd m, sqrt2*cos and sqrt2*sin
    // are +-1; for even m, cos and sin themselves are integers.
    const double theta = m * std::numbers::pi / 4.0;
    const int exponent = (m % 2 == 1) ? 1 : 0;
    const double scale = exponent == 1 ? std::sqrt(2.0) : 1.0;
    const auto c = static_cast<std::int64_t>(std::lround(scale * std::cos(theta)));
    const auto s = static_cast<std::int64_t>(std::lround(scale * std::sin(theta)));
    Cyclotomic diag(c);
    Cyclotomic off(0, 0, -s, 0);  // -i*s
    return {{diag, off, off, diag}, exponent};
}

template <class Amp>
class Register {
public:
    std::size_t live() const { return slots_.size(); }
    bool has(Qubit q) const { return slot_of(q) >= 0; }
    int sqrt2_exponent() const { return sqrt2_exponent_; }
    const std::vector<Amp>& amplitudes() const { return amps_; }

    void add_qubit(Qubit q, Prep prep) {
        std::vector<Amp> next(amps_.size() * 2);
        for (std::size_t x = 0; x < amps_.size(); ++x) {
            if (prep == Prep::Zero) {
                next[2 * x] = amps_[x];
            } else if constexpr (kExact<Amp>) {
                next[2 * x] = amps_[x];
                next[2 * x + 1] = amps_[x];
            } else {
                next[2 * x] = amps_[x] * std::sqrt(0.5);
                next[2 * x + 1] = next[2 * x];
            }
        }
        if constexpr (kExact<Amp>) {
            if (prep == Prep::Plus) ++sqrt2_exponent_;
        }
        amps_ = std::move(next);
        slots_.push_back(q);
    }

    void apply(const Gate& g) {
        if (g.is_diagonal()) {
            apply_diagonal(g);
            return;
        }
        if constexpr (kExact<Amp>) {
            apply_dense(g.qubits[0], exact_dense(g));
        } else {
            apply_dense(g.qubits[0], float_dense(g));
        }
    }

    /// Projects q onto |0> without renormalizing and drops its slot.
    void project_zero(Qubit q) {
        const std::size_t stride = stride_of(q);
        std::vector<Amp> next(amps_.size() / 2);
        std::size_t out = 0;
        for (std::size_t x = 0; x < amps_.size(); ++x) {
            if ((x & stride) == 0) next[out++] = std::move(amps_[x]);
        }
        amps_ = std::move(next);
        slots_.erase(slots_.begin() + slot_of(q));
    }

    /// Unnormalized weights over `keep` (most significant first), summing
    /// the squared amplitudes over all other live qubits.
    std::vector<Prob<Amp>> weights(const std::vector<Qubit>& keep) const {
        std::vector<std::size_t> strides;
        for (Qubit q : keep) strides.push_back(stride_of(q));
        std::vector<Prob<Amp>> w(std::size_t{1} << keep.size());
        for (std::size_t x = 0; x < amps_.size(); ++x) {
            std::size_t k = 0;
            for (std::size_t s : strides) k = (k << 1) | ((x & s) != 0 ? 1U : 0U);
            if constexpr (kExact<Amp>) {
                if (!amps_[x].is_zero()) w[k] += norm_squared(amps_[x]);
            } else {
                w[k] += std::norm(amps_[x]);
            }
        }
        if constexpr (kExact<Amp>) {
            const QuadraticReal scale(Rational(mpq_class(1, mpz_class(1) << sqrt2_exponent_)));
            for (auto& v : w) v *= scale;
        }
        return w;
    }

private:
    int slot_of(Qubit q) const {
        auto it = std::find(slots_.begin(), slots_.end(), q);
        return it == slots_.end() ? -1 : static_cast<int>(it - slots_.begin());
    }

    std::size_t stride_of(Qubit q) const {
        const int s = slot_of(q);
        return std::size_t{1} << (slots_.size() - 1 - static_cast<std::size_t>(s));
    }

    void apply_dense(Qubit q, const Dense1<Amp>& d) {
        const std::size_t stride = stride_of(q);
        for (std::size_t x = 0; x < amps_.size(); ++x) {
            if ((x & stride) != 0) continue;
            Amp a0 = amps_[x];
            Amp a1 = amps_[x | stride];
            amps_[x] = d.m[0] * a0 + d.m[1] * a1;
            amps_[x | stride] = d.m[2] * a0 + d.m[3] * a1;
        }
        if constexpr (kExact<Amp>) {
            sqrt2_exponent_ += d.sqrt2_exponent;
        }
    }

    void apply_diagonal(const Gate& g) {
        std::vector<std::size_t> strides;
        for (Qubit q : g.qubits) strides.push_back(stride_of(q));
        auto local = [&](std::size_t x) {
            std::size_t k = 0;
            for (std::size_t s : strides) k = (k << 1) | ((x & s) != 0 ? 1U : 0U);
            return k;
        };
        if constexpr (kExact<Amp>) {
            if (std::holds_alternative<GeneralDiag1>(g.kind) ||
                std::holds_alternative<GeneralDiag2>(g.kind)) {
                unsupported_exact(g, "entries are not in Q(w)");
            }
            const std::vector<int> d = g.phase_residues();
            for (std::size_t x = 0; x < amps_.size(); ++x) {
                const int r = d[local(x)];
                if (r != 0 && !amps_[x].is_zero()) amps_[x] = amps_[x].times_root(-r);
            }
        } else {
            const std::vector<Complex> d = g.diagonal_entries();
            for (std::size_t x = 0; x < amps_.size(); ++x) amps_[x] *= d[local(x)];
        }
    }

    std::vector<Qubit> slots_;
    std::vector<Amp> amps_{Amp(1)};
    int sqrt2_exponent_ = 0;
};

void check_circuit(const Circuit& circuit) {
    auto problems = validate(circuit);
    if (!problems.empty()) {
        throw Error(ErrorCode::InvalidInput, "invalid circuit: " + problems.front());
    }
}

template <class Amp>
struct Replay {
    std::vector<Prob<Amp>> weights;
    /// Extra factor on the conditioning probability from post-selected qubits
    /// that no gate touches.
    Prob<Amp> untouched_factor{1};
};

/// Runs the circuit keeping `keep` measured, projecting post-selected qubits
/// early and allocating qubits on first use.
template <class Amp>
Replay<Amp> replay(const Circuit& circuit, const std::vector<Qubit>& keep) {
    const std::size_t n_gates = circuit.gates.size();
    const auto n = static_cast<std::size_t>(circuit.n_qubits);

    // Dependencies: diagonal gates commute with each other.
    std::vector<std::vector<std::size_t>> successors(n_gates);
    std::vector<int> pending(n_gates, 0);
    std::vector<std::ptrdiff_t> last_dense(n, -1);
    std::vector<std::vector<std::size_t>> diag_since(n);
    std::vector<int> remaining(n, 0);
    auto link = [&](std::size_t from, std::size_t to) {
        successors[from].push_back(to);
        ++pending[to];
    };
    for (std::size_t i = 0; i < n_gates; ++i) {
        const Gate& g = circuit.gates[i];
        for (Qubit q : g.qubits) {
            const auto uq = static_cast<std::size_t>(q);
            ++remaining[uq];
            if (last_dense[uq] >= 0) link(static_cast<std::size_t>(last_dense[uq]), i);
            if (g.is_diagonal()) {
                diag_since[uq].push_back(i);
            } else {
                for (std::size_t d : diag_since[uq]) link(d, i);
                diag_since[uq].clear();
                last_dense[uq] = static_cast<std::ptrdiff_t>(i);
            }
        }
    }

    Register<Amp> reg;
    Replay<Amp> out;
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n_gates; ++i) {
        if (pending[i] == 0) ready.insert(i);
    }
    auto allocate = [&](Qubit q) {
        if (reg.has(q)) return;
        reg.add_qubit(q, circuit.prep[static_cast<std::size_t>(q)]);
        if (reg.live() > static_cast<std::size_t>(kMaxOracleQubits)) {
            throw Error(ErrorCode::TooManyQubits,
                        "more than " + std::to_string(kMaxOracleQubits) + " live qubits");
        }
    };
    while (!ready.empty()) {
        auto pick = std::find_if(ready.begin(), ready.end(), [&](std::size_t i) {
            const auto& qs = circuit.gates[i].qubits;
            return std::all_of(qs.begin(), qs.end(), [&](Qubit q) { return reg.has(q); });
        });
        if (pick == ready.end()) pick = ready.begin();
        const std::size_t i = *pick;
        ready.erase(pick);
        const Gate& g = circuit.gates[i];
        for (Qubit q : g.qubits) allocate(q);
        reg.apply(g);
        for (Qubit q : g.qubits) {
            if (--remaining[static_cast<std::size_t>(q)] == 0 && circuit.post_select.count(q) != 0) {
                reg.project_zero(q);
            }
        }
        for (std::size_t s : successors[i]) {
            if (--pending[s] == 0) ready.insert(s);
        }
    }
    for (Qubit q : keep) allocate(q);
    for (Qubit q : circuit.post_select) {
        if (circuit.gates.empty() || !std::any_of(circuit.gates.begin(), circuit.gates.end(),
                                                  [q](const Gate& g) {
                                                      return std::find(g.qubits.begin(), g.qubits.end(), q) !=
                                                             g.qubits.end();
                                                  })) {
            if (circuit.prep[static_cast<std::size_t>(q)] == Prep::Plus) {
                if constexpr (kExact<Amp>) {
                    out.untouched_factor *= QuadraticReal(Rational(1, 2));
                } else {
                    out.untouched_factor *= 0.5;
                }
            }
        }
    }
    out.weights = reg.weights(keep);
    return out;
}

template <class Amp>
Distribution distribution_from(const Replay<Amp>& r, std::vector<Qubit> qubits) {
    Distribution d;
    d.qubits = std::move(qubits);
    Prob<Amp> total{};
    for (const auto& w : r.weights) total += w;
    if constexpr (kExact<Amp>) {
        if (total.is_zero()) {
            throw Error(ErrorCode::ZeroPostSelectionProbability, "post-selection probability is exactly 0");
        }
        std::vector<QuadraticReal> exact;
        for (const auto& w : r.weights) {
            exact.push_back(w / total);
            d.probabilities.push_back(exact.back().to_double());
        }
        d.exact = std::move(exact);
        d.exact_conditioning = total * r.untouched_factor;
        d.conditioning_probability = d.exact_conditioning->to_double();
    } else {
        const double cond = total * r.untouched_factor;
        if (cond < kFloatPostSelectionFloor) {
            throw Error(ErrorCode::ZeroPostSelectionProbability,
                        "post-selection probability below " + std::to_string(kFloatPostSelectionFloor));
        }
        for (double w : r.weights) d.probabilities.push_back(w / total);
        d.conditioning_probability = cond;
    }
    return d;
}

std::vector<Qubit> output_qubits(const Circuit& circuit) {
    std::vector<Qubit> qs;
    for (const auto& [wire, q] : circuit.effective_output_map()) qs.push_back(q);
    return qs;
}

void check_subset(const Circuit& circuit, const std::vector<Qubit>& subset, const std::vector<int>& outcome) {
    if (subset.size() != outcome.size()) {
        throw Error(ErrorCode::InvalidInput, "subset and outcome lengths differ");
    }
    std::set<Qubit> seen;
    for (Qubit q : subset) {
        if (q < 0 || q >= circuit.n_qubits || !seen.insert(q).second) {
            throw Error(ErrorCode::InvalidInput, "bad subset qubit " + std::to_string(q));
        }
        if (circuit.post_select.count(q) != 0) {
            throw Error(ErrorCode::InvalidInput, "subset overlaps the post-selection register");
        }
    }
    for (int b : outcome) {
        if (b != 0 && b != 1) throw Error(ErrorCode::InvalidInput, "outcome bits must be 0 or 1");
    }
}

std::size_t outcome_index(const std::vector<int>& outcome) {
    std::size_t k = 0;
    for (int b : outcome) k = (k << 1) | static_cast<std::size_t>(b);
    return k;
}

}  // namespace

std::complex<double> StateVector::amplitude(std::uint64_t index) const {
    if (backend == Backend::Float) return amplitudes[index];
    return exact_amplitudes[index].to_complex() * std::pow(2.0, -0.5 * sqrt2_exponent);
}

Cyclotomic StateVector::exact_amplitude(std::uint64_t index) const {
    Cyclotomic a = exact_amplitudes.at(index);
    // (w - w^3)/2 per factor; pairs collapse to 1/2.
    a = a.scaled(Rational(mpq_class(1, mpz_class(1) << (sqrt2_exponent / 2))));
    if (sqrt2_exponent % 2 != 0) a = a * Cyclotomic::inv_sqrt2();
    return a;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (std::uint64_t i = 0; i < size(); ++i) s += std::norm(amplitude(i));
    return s;
}

QuadraticReal StateVector::exact_norm_squared() const {
    QuadraticReal s;
    for (const auto& a : exact_amplitudes) s += qdich::norm_squared(a);
    return s * QuadraticReal(Rational(mpq_class(1, mpz_class(1) << sqrt2_exponent)));
}

StateVector simulate(const Circuit& circuit, Backend backend) {
    check_circuit(circuit);
    if (circuit.n_qubits > kMaxOracleQubits) {
        throw Error(ErrorCode::TooManyQubits, std::to_string(circuit.n_qubits) + " qubits");
    }
    StateVector sv;
    sv.n_qubits = circuit.n_qubits;
    sv.backend = backend;
    auto run = [&](auto& reg) {
        for (Qubit q = 0; q < circuit.n_qubits; ++q) reg.add_qubit(q, circuit.prep[static_cast<std::size_t>(q)]);
        for (const Gate& g : circuit.gates) reg.apply(g);
    };
    if (backend == Backend::Exact) {
        Register<Cyclotomic> reg;
        run(reg);
        sv.exact_amplitudes = reg.amplitudes();
        sv.sqrt2_exponent = reg.sqrt2_exponent();
    } else {
        Register<Complex> reg;
        run(reg);
        sv.amplitudes = reg.amplitudes();
    }
    return sv;
}

std::string Distribution::bitstring(std::size_t index) const {
    std::string s(qubits.size(), '0');
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if ((index >> (qubits.size() - 1 - i)) & 1U) s[i] = '1';
    }
    return s;
}

Distribution post_selected_distribution(const Circuit& circuit, Backend backend) {
    check_circuit(circuit);
    std::vector<Qubit> keep = output_qubits(circuit);
    if (backend == Backend::Exact) {
        return distribution_from(replay<Cyclotomic>(circuit, keep), keep);
    }
    return distribution_from(replay<Complex>(circuit, keep), keep);
}

double marginal_oracle(const Circuit& circuit, const std::vector<Qubit>& subset,
                       const std::vector<int>& outcome, Backend backend) {
    if (backend == Backend::Exact) return marginal_oracle_exact(circuit, subset, outcome).to_double();
    check_circuit(circuit);
    check_subset(circuit, subset, outcome);
    Distribution d = distribution_from(replay<Complex>(circuit, subset), subset);
    return d.probabilities[outcome_index(outcome)];
}

QuadraticReal marginal_oracle_exact(const Circuit& circuit, const std::vector<Qubit>& subset,
                                    const std::vector<int>& outcome) {
    check_circuit(circuit);
    check_subset(circuit, subset, outcome);
    Distribution d = distribution_from(replay<Cyclotomic>(circuit, subset), subset);
    return (*d.exact)[outcome_index(outcome)];
}

MultiplicativeError multiplicative_error(const Distribution& d, const Distribution& d2) {
    if (d.size() != d2.size()) {
        throw Error(ErrorCode::InvalidInput, "distributions are over different outcome spaces");
    }
    MultiplicativeError out;
    if (d.exact && d2.exact) {
        QuadraticReal worst(1);
        for (std::size_t x = 0; x < d.size(); ++x) {
            const QuadraticReal& a = (*d.exact)[x];
            const QuadraticReal& b = (*d2.exact)[x];
            if (a.is_zero() && b.is_zero()) continue;
            if (a.is_zero() || b.is_zero()) {
                out.infinite = true;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
            QuadraticReal r = a / b;
            if (r < QuadraticReal(1)) r = r.inverse();
            if (worst < r) worst = r;
        }
        out.value = worst.to_double();
        out.exact = worst;
        return out;
    }
    double worst = 1.0;
    for (std::size_t x = 0; x < d.size(); ++x) {
        const double a = d.probabilities[x];
        const double b = d2.probabilities[x];
        if (a == 0.0 && b == 0.0) continue;
        if (a == 0.0 || b == 0.0) {
            out.infinite = true;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        worst = std::max({worst, a / b, b / a});
    }
    out.value = worst;
    return out;
}

}  // namespace qdich
