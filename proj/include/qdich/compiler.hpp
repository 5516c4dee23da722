#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdich/circuit.hpp"
#include "qdich/cyclotomic.hpp"

namespace qdich {

/// 2x2 unitary, row-major. `exact` is set when every entry lies in Q(w).
struct SingleQubitUnitary {
    std::array<std::complex<double>, 4> entries{};
    std::optional<std::array<Cyclotomic, 4>> exact;

    static SingleQubitUnitary hadamard();
    static SingleQubitUnitary tdg();
    /// exp(-i * angle * X); exact when angle is a multiple of pi/4.
    static SingleQubitUnitary xrot(double angle);
    static SingleQubitUnitary from_complex(const std::array<std::complex<double>, 4>& m);
    /// "H", "Htilde", "Tdg", "X", "I" or "xrot:<radians>".
    static SingleQubitUnitary named(const std::string& name);
};

/// Diagonal coupling W that turns <0|_j F_j W_{a,j} (|+>_a (x) .) into
/// lambda * H from wire j to wire a. Entries are indexed 2a + b.
struct GadgetSpec {
    SingleQubitUnitary f;
    std::complex<double> r0, r1;
    std::complex<double> lambda;
    std::array<std::complex<double>, 4> w{};

    /// Present on the exact path (F exact, phase a multiple of pi/4, and |r0|
    /// expressible in Q(sqrt 2)).
    std::optional<std::array<Cyclotomic, 2>> exact_r;
    std::optional<Cyclotomic> exact_lambda;
    std::optional<std::array<Cyclotomic, 4>> exact_w;
};

/// Solves w_ab = lambda (-1)^(ab) / r_b with lambda = |r0| exp(i lambda_phase).
/// Throws ZeroMatrixElement when r0 r1 = 0 and NoUnitaryW when |r0| != |r1|.
GadgetSpec gadget_solve(const SingleQubitUnitary& f, double lambda_phase = 0.0);

/// Physical qubits each logical wire occupies, in order. couplings[w][i] is
/// the gate index of the coupling that moved wire w from chain[w][i] to
/// chain[w][i + 1].
struct WireChain {
    std::map<int, std::vector<Qubit>> chain;
    std::map<int, std::vector<std::size_t>> couplings;
};

/// Rewrites a {H, Tdg, CZ} circuit so every wire starts in |+>, carries at
/// most one diagonal gate between consecutive Hadamards, and ends with
/// H e^{i pi Z/4} H followed by a single XRot(pi/4).
Circuit preprocess(const Circuit& circuit);

/// Replaces every Hadamard of a preprocessed circuit by the diag(1,i,1,-i)
/// coupling to a fresh |+> auxiliary, XRot(pi/4) on the old qubit, and
/// post-selection of the old qubit.
std::pair<Circuit, WireChain> hadamard_substitute(const Circuit& preprocessed);

/// Gathers the diagonal gates of a substituted circuit into a depth-1
/// instance with gamma = beta = pi/4.
QaoaInstance collect_phases(const Circuit& substituted);

/// Shifts table entries by multiples of 8 so each term, and hence the total
/// cost, is nondecreasing in every bit.
CostFunction make_monotone(const CostFunction& cost);

struct CompileReport {
    int source_qubits = 0;
    int auxiliary_qubits = 0;
    int post_selected = 0;
    int interaction_degree = 0;
    std::map<int, int> degree_histogram;
    WireChain chains;
};

QaoaInstance compile(const Circuit& circuit, bool monotone = false, CompileReport* report = nullptr);

/// H^{(x)n} D H^{(x)n} |0^n> with D = exp(-i pi/4 cost), post-selected.
struct IqpInstance {
    int n = 0;
    CostFunction cost;
    std::set<Qubit> post_select;
    OutputMap output_map;

    Circuit to_circuit() const;
};

/// IQP specialization: F = H, W = CZ, and a final Hadamard wall instead of
/// the mixer.
IqpInstance compile_iqp(const Circuit& circuit, bool monotone = false, CompileReport* report = nullptr);

}  // namespace qdich
