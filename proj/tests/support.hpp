#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qdich/circuit.hpp"

namespace qdich::testing {

using Rng = std::mt19937_64;

/// Random circuit over {H, Tdg, CZ} on |0...0>.
Circuit random_source_circuit(Rng& rng, int n, int gates);

/// Every circuit over {H, Tdg, CZ} on n qubits with at most max_gates gates.
std::vector<Circuit> exhaustive_circuits(int n, int max_gates);

/// Degree-<=2 instance mixing isolated vertices, paths and cycles, with real
/// tables in [-2, 2], occasional duplicate edge terms, 1-local terms and
/// one-sided 2-variable terms, and parameters in [0, 2pi).
QaoaInstance random_degree2_instance(Rng& rng, int n, int p);

/// Path 0-1-...-(n-1) or the cycle closing it, random tables and parameters.
QaoaInstance path_instance(Rng& rng, int n, int p);
QaoaInstance cycle_instance(Rng& rng, int n, int p);

/// Unit-weight chain with p layers; only the term structure matters.
QaoaInstance structural_instance(int n, int p, bool cycle);

/// Dense state of a circuit, computed gate by gate with no post-selection.
/// Independent of the library's simulator. Qubit 0 is the most significant
/// bit.
std::vector<std::complex<double>> dense_state(const Circuit& circuit);

/// Output probabilities of a plain QAOA instance built directly from the
/// cost function: e^{-i beta B} e^{-i gamma C} per layer on |+>^n.
std::vector<double> qaoa_probabilities(const QaoaInstance& instance);

/// Sum of probs over full strings that agree with outcome on subset.
double brute_marginal(const std::vector<double>& probs, int n, const std::vector<int>& subset,
                      const std::vector<int>& outcome);

}  // namespace qdich::testing
