#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qdich {

using Qubit = int;

// Gate kinds. Diagonal phase gates store residues d in {0..7}; entry d means
// exp(-i*pi*d/4). Two-qubit diagonal entries are indexed by 2*bit(q0) + bit(q1).
struct H {};
struct Tdg {};
struct CZ {};
struct PhaseDiag1 {
    std::array<int, 2> entries{};
};
struct PhaseDiag2 {
    std::array<int, 4> entries{};
};
/// exp(-i * angle * X)
struct XRot {
    double angle = 0.0;
};
struct GeneralDiag1 {
    std::array<std::complex<double>, 2> entries{};
};
struct GeneralDiag2 {
    std::array<std::complex<double>, 4> entries{};
};

using GateKind = std::variant<H, Tdg, CZ, PhaseDiag1, PhaseDiag2, XRot, GeneralDiag1, GeneralDiag2>;

struct Gate {
    GateKind kind;
    std::vector<Qubit> qubits;

    static Gate h(Qubit q) { return {H{}, {q}}; }
    static Gate tdg(Qubit q) { return {Tdg{}, {q}}; }
    static Gate cz(Qubit a, Qubit b) { return {CZ{}, {a, b}}; }
    static Gate phase1(Qubit q, int d0, int d1);
    static Gate phase2(Qubit a, Qubit b, int d00, int d01, int d10, int d11);
    static Gate xrot(Qubit q, double angle) { return {XRot{angle}, {q}}; }

    std::string name() const;
    /// Number of qubits the kind acts on.
    std::size_t arity() const;
    bool is_diagonal() const;
    /// Diagonal entries as residues mod 8, for H-free exact-phase kinds.
    std::vector<int> phase_residues() const;
    /// Diagonal entries as complex numbers (diagonal kinds only).
    std::vector<std::complex<double>> diagonal_entries() const;
};

enum class Prep { Zero, Plus };

/// Logical wire index -> physical qubit.
using OutputMap = std::map<int, Qubit>;

struct Circuit {
    int n_qubits = 0;
    std::vector<Prep> prep;
    std::vector<Gate> gates;
    std::set<Qubit> post_select;
    /// Optional projection point per post-selected qubit: the number of gates
    /// already emitted when the qubit was projected. Absent means the end.
    std::map<Qubit, std::size_t> post_select_at;
    OutputMap output_map;

    static Circuit zeros(int n);
    static Circuit pluses(int n);

    /// output_map, or the identity on every qubit outside post_select when
    /// the map is empty.
    OutputMap effective_output_map() const;
};

/// Human-readable description of every broken Circuit invariant.
std::vector<std::string> validate(const Circuit& circuit);

/// 2-local term: a value table over the assignments of its support, indexed
/// with support[0] as the most significant bit.
struct Term {
    std::vector<int> support;
    std::vector<double> table;

    double value(int bit0, int bit1 = 0) const {
        return support.size() == 1 ? table[static_cast<std::size_t>(bit0)]
                                   : table[static_cast<std::size_t>(2 * bit0 + bit1)];
    }
    bool depends_on_first() const;
    bool depends_on_second() const;
};

struct CostFunction {
    int n_vars = 0;
    std::vector<Term> terms;
    bool integer_valued = false;

    double evaluate(std::uint64_t assignment) const;  // var 0 = most significant bit
    /// Throws InvalidInput when a term breaks an invariant.
    void check() const;
};

struct QaoaInstance {
    int n = 0;
    int p = 0;
    CostFunction cost;
    std::vector<double> gammas;
    std::vector<double> betas;
    std::set<Qubit> post_select;
    OutputMap output_map;

    void check() const;
};

struct InteractionGraph {
    int n = 0;
    std::set<std::pair<int, int>> edges;  // first < second
    int max_degree = 0;

    std::vector<int> degrees() const;
    std::vector<std::vector<int>> adjacency() const;
};

InteractionGraph interaction_graph(const CostFunction& cost);

/// Layer-by-layer gate expansion. Integer-valued costs at phases that are
/// multiples of pi/4 become PhaseDiag gates, otherwise GeneralDiag.
Circuit qaoa_to_circuit(const QaoaInstance& instance);

/// Whether angle is an integer multiple of pi/4 (to 1e-12), and which.
bool quarter_pi_multiple(double angle, int* multiple = nullptr);

}  // namespace qdich
