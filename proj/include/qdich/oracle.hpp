#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdich/circuit.hpp"
#include "qdich/cyclotomic.hpp"

namespace qdich {

enum class Backend { Exact, Float };

inline constexpr int kMaxOracleQubits = 24;
/// Float-backend conditioning probabilities below this count as zero.
inline constexpr double kFloatPostSelectionFloor = 1e-12;

/// Dense state. Qubit 0 is the most significant bit of the amplitude index.
///
/// The exact backend stores unnormalized amplitudes in Q(w) together with a
/// shared exponent k: the true amplitude is exact_amplitudes[i] * 2^(-k/2).
struct StateVector {
    int n_qubits = 0;
    Backend backend = Backend::Float;
    std::vector<std::complex<double>> amplitudes;
    std::vector<Cyclotomic> exact_amplitudes;
    int sqrt2_exponent = 0;

    std::size_t size() const { return std::size_t{1} << n_qubits; }
    std::complex<double> amplitude(std::uint64_t index) const;
    /// True amplitude with the 1/sqrt(2) factors written as (w - w^3)/2.
    Cyclotomic exact_amplitude(std::uint64_t index) const;
    double norm_squared() const;
    /// Sum |a|^2 * 2^(-k); exactly 1 for a normalized exact state.
    QuadraticReal exact_norm_squared() const;
};

/// Final state before measurement and post-selection.
StateVector simulate(const Circuit& circuit, Backend backend);

/// Outcome distribution over a list of measured qubits.
struct Distribution {
    std::vector<Qubit> qubits;  // most significant first
    std::vector<double> probabilities;
    std::optional<std::vector<QuadraticReal>> exact;
    double conditioning_probability = 1.0;
    std::optional<QuadraticReal> exact_conditioning;

    std::size_t size() const { return probabilities.size(); }
    std::string bitstring(std::size_t index) const;
};

/// Distribution of the output_map wires (in wire order) conditioned on every
/// post-selected qubit reading 0; all other qubits are traced out.
///
/// Gates are replayed in a dependency-respecting order that allocates qubits
/// lazily and projects post-selected qubits as soon as their last gate has run,
/// so long compiled circuits stay within kMaxOracleQubits live qubits.
Distribution post_selected_distribution(const Circuit& circuit, Backend backend);

/// Pr[Z_S = z_S], conditioned on post-selection when the register is nonempty.
double marginal_oracle(const Circuit& circuit, const std::vector<Qubit>& subset,
                       const std::vector<int>& outcome, Backend backend);
QuadraticReal marginal_oracle_exact(const Circuit& circuit, const std::vector<Qubit>& subset,
                                    const std::vector<int>& outcome);

struct MultiplicativeError {
    bool infinite = false;
    double value = 1.0;
    /// Set when both inputs carry exact probabilities and the error is finite.
    std::optional<QuadraticReal> exact;
};

/// Smallest c >= 1 with D(x)/c <= D2(x) <= c D(x) for every x.
MultiplicativeError multiplicative_error(const Distribution& d, const Distribution& d2);

}  // namespace qdich
