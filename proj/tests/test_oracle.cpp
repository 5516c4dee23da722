#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qdich/compiler.hpp"
#include "qdich/error.hpp"
#include "qdich/oracle.hpp"
#include "support.hpp"

using namespace qdich;
using qdich::testing::Rng;

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

const Cyclotomic kHalf = Cyclotomic(Rational(1, 2));

/// Random circuit drawn from every exact-capable gate kind.
Circuit random_exact_circuit(Rng& rng, int n, int gates) {
    Circuit c = Circuit::zeros(n);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int q = 0; q < n; ++q) c.prep[static_cast<std::size_t>(q)] = coin(rng) ? Prep::Plus : Prep::Zero;
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_int_distribution<int> residue(0, 7);
    for (int i = 0; i < gates; ++i) {
        const int q = qubit(rng);
        int r = qubit(rng);
        while (n > 1 && r == q) r = qubit(rng);
        const int k = n > 1 ? kind(rng) : kind(rng) % 4;
        switch (k) {
            case 0: c.gates.push_back(Gate::h(q)); break;
            case 1: c.gates.push_back(Gate::tdg(q)); break;
            case 2: c.gates.push_back(Gate::phase1(q, residue(rng), residue(rng))); break;
            case 3: c.gates.push_back(Gate::xrot(q, residue(rng) * kQuarterPi)); break;
            case 4: c.gates.push_back(Gate::cz(q, r)); break;
            default:
                c.gates.push_back(Gate::phase2(q, r, residue(rng), residue(rng), residue(rng), residue(rng)));
        }
    }
    return c;
}

/// Conditional output distribution computed from the independent dense
/// state in the test support library.
std::vector<double> dense_conditional(const Circuit& c) {
    const auto psi = qdich::testing::dense_state(c);
    const int n = c.n_qubits;
    std::vector<Qubit> outs;
    for (const auto& [w, q] : c.effective_output_map()) outs.push_back(q);
    std::vector<double> probs(std::size_t{1} << outs.size(), 0.0);
    double total = 0.0;
    for (std::uint64_t z = 0; z < psi.size(); ++z) {
        bool kept = true;
        for (Qubit q : c.post_select) kept = kept && ((z >> (n - 1 - q)) & 1U) == 0;
        if (!kept) continue;
        std::size_t idx = 0;
        for (Qubit q : outs) idx = (idx << 1) | ((z >> (n - 1 - q)) & 1U);
        probs[idx] += std::norm(psi[z]);
        total += std::norm(psi[z]);
    }
    for (double& p : probs) p /= total;
    return probs;
}

Distribution exact_distribution(std::vector<QuadraticReal> probs) {
    Distribution d;
    d.exact = probs;
    for (const auto& p : probs) d.probabilities.push_back(p.to_double());
    return d;
}

Distribution float_distribution(std::vector<double> probs) {
    Distribution d;
    d.probabilities = std::move(probs);
    return d;
}

}  // namespace

TEST(Simulate, HadamardOnZero) {
    Circuit c = Circuit::zeros(1);
    c.gates = {Gate::h(0)};
    const auto f = simulate(c, Backend::Float);
    EXPECT_NEAR(f.amplitude(0).real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(f.amplitude(1).real(), std::sqrt(0.5), 1e-15);
    const auto e = simulate(c, Backend::Exact);
    EXPECT_EQ(e.exact_amplitude(0), Cyclotomic::inv_sqrt2());
    EXPECT_EQ(e.exact_amplitude(1), Cyclotomic::inv_sqrt2());
}

TEST(Simulate, IdentityQaoaIsUniform) {
    QaoaInstance inst;
    inst.n = 3;
    inst.p = 1;
    inst.cost.n_vars = 3;
    inst.cost.integer_valued = true;
    inst.cost.terms = {{{0, 1}, {0, 6, 0, 2}}, {{2}, {7, 1}}};
    inst.gammas = {0.0};
    inst.betas = {0.0};
    const auto e = simulate(qaoa_to_circuit(inst), Backend::Exact);
    const Cyclotomic amp = Cyclotomic::inv_sqrt2() * Cyclotomic::inv_sqrt2() * Cyclotomic::inv_sqrt2();
    for (std::uint64_t i = 0; i < e.size(); ++i) EXPECT_EQ(e.exact_amplitude(i), amp);
}

TEST(Simulate, GadgetFragmentActsAsHadamard) {
    // a = qubit 0 in |+>, j = qubit 1 in |b>; W = diag(1, i, 1, -i) then
    // exp(-i pi X/4) on j; projecting j on 0 leaves H|b>/sqrt2 on a.
    for (int b = 0; b < 2; ++b) {
        Circuit c = Circuit::zeros(2);
        c.prep[0] = Prep::Plus;
        Cyclotomic phase(1);
        if (b == 1) {
            c.gates.push_back(Gate::xrot(1, 2 * kQuarterPi));  // -i X
            phase = -root_power(2);
        }
        c.gates.push_back(Gate::phase2(0, 1, 0, 6, 0, 2));
        c.gates.push_back(Gate::xrot(1, kQuarterPi));
        const auto s = simulate(c, Backend::Exact);
        const Cyclotomic sign = b == 0 ? Cyclotomic(1) : Cyclotomic(-1);
        EXPECT_EQ(s.exact_amplitude(0b00), phase * kHalf);
        EXPECT_EQ(s.exact_amplitude(0b10), phase * kHalf * sign);
    }
}

TEST(Simulate, GadgetWithEntangledSpectators) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        // Wire j plus three spectators, entangled by a random exact circuit.
        Circuit inner = random_exact_circuit(rng, 4, 14);
        const auto before = simulate(inner, Backend::Exact);

        Circuit full = Circuit::zeros(5);
        full.prep[0] = Prep::Plus;
        for (int q = 0; q < 4; ++q) full.prep[static_cast<std::size_t>(q + 1)] = inner.prep[static_cast<std::size_t>(q)];
        for (Gate g : inner.gates) {
            for (Qubit& q : g.qubits) q += 1;
            full.gates.push_back(g);
        }
        full.gates.push_back(Gate::phase2(0, 1, 0, 6, 0, 2));
        full.gates.push_back(Gate::xrot(1, kQuarterPi));
        const auto after = simulate(full, Backend::Exact);

        // |0>_j|phi0> + |1>_j|phi1>  ->  (1/sqrt2) H (from j to a) on the same spectators.
        for (std::uint64_t a = 0; a < 2; ++a) {
            for (std::uint64_t s = 0; s < 8; ++s) {
                const Cyclotomic phi0 = before.exact_amplitude(s);
                const Cyclotomic phi1 = before.exact_amplitude(8 | s);
                const Cyclotomic want = kHalf * (a == 0 ? phi0 + phi1 : phi0 - phi1);
                EXPECT_EQ(after.exact_amplitude((a << 4) | s), want);
            }
        }
    }
}

TEST(Simulate, ExactMatchesFloat) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 10;
        const Circuit c = random_exact_circuit(rng, n, 3 * n + 5);
        const auto e = simulate(c, Backend::Exact);
        const auto f = simulate(c, Backend::Float);
        for (std::uint64_t i = 0; i < e.size(); ++i) {
            const auto a = e.exact_amplitude(i).to_complex();
            EXPECT_NEAR(a.real(), f.amplitude(i).real(), 1e-10);
            EXPECT_NEAR(a.imag(), f.amplitude(i).imag(), 1e-10);
        }
        const auto ref = qdich::testing::dense_state(c);
        for (std::uint64_t i = 0; i < e.size(); ++i) EXPECT_LT(std::abs(f.amplitude(i) - ref[i]), 1e-10);
    }
}

TEST(Simulate, NormPreservedAfterEveryGate) {
    Rng rng(13);
    const Circuit c = random_exact_circuit(rng, 5, 30);
    Circuit prefix = c;
    for (std::size_t k = 0; k <= c.gates.size(); ++k) {
        prefix.gates.assign(c.gates.begin(), c.gates.begin() + static_cast<std::ptrdiff_t>(k));
        EXPECT_NEAR(simulate(prefix, Backend::Float).norm_squared(), 1.0, 1e-10);
        EXPECT_EQ(simulate(prefix, Backend::Exact).exact_norm_squared(), QuadraticReal(1));
    }
}

TEST(Simulate, DisjointGatesCommute) {
    Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = random_exact_circuit(rng, 4, 12);
        const auto base = simulate(c, Backend::Exact);
        for (std::size_t i = 0; i + 1 < c.gates.size(); ++i) {
            const auto& a = c.gates[i].qubits;
            const auto& b = c.gates[i + 1].qubits;
            bool disjoint = true;
            for (Qubit q : a) disjoint = disjoint && std::find(b.begin(), b.end(), q) == b.end();
            if (!disjoint) continue;
            Circuit swapped = c;
            std::swap(swapped.gates[i], swapped.gates[i + 1]);
            const auto s = simulate(swapped, Backend::Exact);
            for (std::uint64_t k = 0; k < s.size(); ++k) EXPECT_EQ(s.exact_amplitude(k), base.exact_amplitude(k));
        }
    }
}

TEST(Simulate, Errors) {
    Circuit big = Circuit::zeros(25);
    EXPECT_THROW(
        {
            try {
                simulate(big, Backend::Float);
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), ErrorCode::TooManyQubits);
                throw;
            }
        },
        Error);
    Circuit rot = Circuit::zeros(1);
    rot.gates = {Gate::xrot(0, 0.3)};
    try {
        simulate(rot, Backend::Exact);
        FAIL() << "expected ExactBackendUnsupportedGate";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ExactBackendUnsupportedGate);
    }
    EXPECT_NO_THROW(simulate(rot, Backend::Float));
}

TEST(PostSelected, EmptyRegisterIsOrdinaryDistribution) {
    Rng rng(15);
    const Circuit c = random_exact_circuit(rng, 3, 10);
    const auto d = post_selected_distribution(c, Backend::Exact);
    const auto s = simulate(c, Backend::Exact);
    ASSERT_EQ(d.size(), 8U);
    for (std::uint64_t i = 0; i < 8; ++i) EXPECT_EQ((*d.exact)[i], norm_squared(s.exact_amplitude(i)));
    EXPECT_EQ(*d.exact_conditioning, QuadraticReal(1));
}

TEST(PostSelected, PlusQubitProjected) {
    Circuit c = Circuit::zeros(2);
    c.prep[0] = Prep::Plus;
    c.gates = {Gate::h(1)};
    c.post_select = {0};
    const auto d = post_selected_distribution(c, Backend::Exact);
    EXPECT_EQ(*d.exact_conditioning, QuadraticReal(Rational(1, 2)));
    EXPECT_EQ(d.qubits, std::vector<Qubit>{1});
    EXPECT_EQ((*d.exact)[0], QuadraticReal(Rational(1, 2)));
    EXPECT_NEAR(post_selected_distribution(c, Backend::Float).conditioning_probability, 0.5, 1e-15);
}

TEST(PostSelected, ZeroProbabilityRejected) {
    Circuit c = Circuit::zeros(2);
    c.gates = {Gate::xrot(0, 2 * kQuarterPi), Gate::h(1)};
    c.post_select = {0};
    for (Backend b : {Backend::Exact, Backend::Float}) {
        try {
            post_selected_distribution(c, b);
            FAIL() << "expected ZeroPostSelectionProbability";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ZeroPostSelectionProbability);
        }
    }
}

TEST(PostSelected, CompiledHTdgHMatchesSource) {
    Circuit src = Circuit::zeros(2);
    src.gates = {Gate::h(0), Gate::tdg(0), Gate::h(0)};
    const auto want = post_selected_distribution(src, Backend::Exact);
    const auto got = post_selected_distribution(qaoa_to_circuit(compile(src)), Backend::Exact);
    EXPECT_EQ(*want.exact, *got.exact);
    EXPECT_EQ((*want.exact)[0], QuadraticReal(Rational(1, 2), Rational(1, 4)));  // cos^2(pi/8)
}

TEST(PostSelected, ReplayMatchesDenseSimulation) {
    // Compiled circuits exercise lazy allocation and early projection; compare
    // against plain dense simulation of the whole register.
    Rng rng(16);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Circuit src = qdich::testing::random_source_circuit(rng, 2, 1 + trial % 4);
        const Circuit c = qaoa_to_circuit(compile(src));
        if (c.n_qubits > 20) continue;
        const auto want = dense_conditional(c);
        const auto got = post_selected_distribution(c, Backend::Float);
        ASSERT_EQ(want.size(), got.size());
        for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got.probabilities[i], want[i], 1e-10);
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(PostSelected, ManyQubitsStayWithinLiveCap) {
    // A long single wire compiles to far more than 24 qubits, but only a few
    // are live at once.
    Circuit src = Circuit::zeros(1);
    for (int i = 0; i < 30; ++i) {
        src.gates.push_back(Gate::tdg(0));
        src.gates.push_back(Gate::h(0));
    }
    const Circuit c = qaoa_to_circuit(compile(src));
    ASSERT_GT(c.n_qubits, kMaxOracleQubits);
    const auto want = post_selected_distribution(src, Backend::Exact);
    const auto got = post_selected_distribution(c, Backend::Exact);
    EXPECT_EQ(*want.exact, *got.exact);
}

TEST(MarginalOracle, EmptySubsetIsOne) {
    Rng rng(17);
    const Circuit c = random_exact_circuit(rng, 4, 10);
    EXPECT_EQ(marginal_oracle_exact(c, {}, {}), QuadraticReal(1));
    EXPECT_NEAR(marginal_oracle(c, {}, {}, Backend::Float), 1.0, 1e-12);
}

TEST(MarginalOracle, UniformState) {
    Circuit c = Circuit::pluses(5);
    EXPECT_EQ(marginal_oracle_exact(c, {0, 2, 4}, {1, 0, 1}), QuadraticReal(Rational(1, 8)));
    EXPECT_NEAR(marginal_oracle(c, {3}, {0}, Backend::Float), 0.5, 1e-15);
}

TEST(MarginalOracle, TotalProbability) {
    Rng rng(18);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit c = random_exact_circuit(rng, 5, 15);
        const std::vector<Qubit> s{trial % 5, (trial + 2) % 5};
        const std::vector<int> z{trial % 2, (trial / 2) % 2};
        const Qubit t = (trial + 3) % 5;
        auto s0 = s;
        s0.push_back(t);
        auto z0 = z;
        z0.push_back(0);
        auto z1 = z;
        z1.push_back(1);
        EXPECT_EQ(marginal_oracle_exact(c, s0, z0) + marginal_oracle_exact(c, s0, z1), marginal_oracle_exact(c, s, z));
    }
}

TEST(MultiplicativeError, Examples) {
    const auto u = exact_distribution({QuadraticReal(Rational(1, 2)), QuadraticReal(Rational(1, 2))});
    EXPECT_EQ(*multiplicative_error(u, u).exact, QuadraticReal(1));
    // Two-sided pointwise bound: max(0.6 / 0.5, 0.5 / 0.4).
    const auto d2 = exact_distribution({QuadraticReal(Rational(3, 5)), QuadraticReal(Rational(2, 5))});
    EXPECT_EQ(*multiplicative_error(u, d2).exact, QuadraticReal(Rational(5, 4)));
    EXPECT_EQ(*multiplicative_error(d2, u).exact, QuadraticReal(Rational(5, 4)));
    const auto e = multiplicative_error(float_distribution({1.0, 0.0}), float_distribution({0.5, 0.5}));
    EXPECT_TRUE(e.infinite);
    EXPECT_NEAR(multiplicative_error(float_distribution({0.5, 0.5}), float_distribution({0.6, 0.4})).value, 1.25, 1e-15);
    // Common zeros are ignored.
    EXPECT_EQ(multiplicative_error(float_distribution({0.0, 1.0}), float_distribution({0.0, 1.0})).value, 1.0);
}
