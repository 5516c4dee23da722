#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qdich/circuit.hpp"

namespace qdich {

enum class ComponentKind { Isolated, Path, Cycle };

std::string to_string(ComponentKind kind);

/// Connected piece of a max-degree-2 interaction graph. For a path, edges[i]
/// joins vertices[i] and vertices[i + 1]; a cycle adds the wrap edge
/// (vertices.back(), vertices.front()) as its last edge.
struct Component {
    ComponentKind kind = ComponentKind::Isolated;
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> edges;
};

/// Paths run endpoint to endpoint from the lower-indexed endpoint; cycles
/// start at their lowest vertex and head toward its lower-indexed neighbour.
/// Components are listed by ascending lowest vertex.
std::vector<Component> decompose(const InteractionGraph& graph);

/// Cuts are numbered 1..n-1; cut i separates ordering positions 1..i from
/// i+1..n (1-based positions).
struct CutProfile {
    std::vector<int> ordering;
    std::vector<int> edge_crossings;  // delta(i), interaction-graph edges
    std::vector<int> gate_crossings;  // gates of the layered circuit
    int max_delta = 0;
    int cut_width = 0;  // max gate_crossings
};

/// Empty ordering means the natural order 0..n-1.
CutProfile cut_width(const QaoaInstance& instance, const std::vector<int>& ordering = {});

/// Vertex -> required bit.
using Constraints = std::map<int, int>;

/// Exact marginal of one component's output distribution. Unconstrained
/// vertices are traced out during the sweep.
double component_marginal(const Component& component, const QaoaInstance& instance,
                          const Constraints& constraints);

/// Marginals and chain-rule sampling for plain (no post-selection) QAOA
/// instances of interaction degree at most 2.
class DegreeTwoSimulator {
public:
    explicit DegreeTwoSimulator(const QaoaInstance& instance);
    ~DegreeTwoSimulator();
    DegreeTwoSimulator(DegreeTwoSimulator&&) noexcept;
    DegreeTwoSimulator& operator=(DegreeTwoSimulator&&) noexcept;

    const std::vector<Component>& components() const;

    /// Pr[Z_S = z_S].
    double marginal(const std::vector<int>& subset, const std::vector<int>& outcome) const;

    struct Step {
        int vertex = 0;
        int bit = 0;
        double conditional = 0.0;
    };
    struct Sample {
        std::string bits;  // qubit 0 leftmost
        std::vector<Step> steps;
    };

    /// Exact samples drawn from a std::mt19937_64 stream seeded with `seed`;
    /// uniforms are (u64 >> 11) * 2^-53, so streams match across platforms.
    std::vector<Sample> sample(std::uint64_t seed, std::size_t count) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

double marginal(const QaoaInstance& instance, const std::vector<int>& subset,
                const std::vector<int>& outcome);

std::vector<std::string> sample(const QaoaInstance& instance, std::uint64_t seed, std::size_t count);

}  // namespace qdich
