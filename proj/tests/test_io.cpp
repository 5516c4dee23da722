#include <gtest/gtest.h>

#include <numbers>

#include "qdich/compiler.hpp"
#include "qdich/error.hpp"
#include "qdich/io.hpp"
#include "support.hpp"

using namespace qdich;
using qdich::testing::Rng;

namespace {

ErrorCode code_of(const std::string& text) {
    try {
        io::circuit_from_json(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error for " << text;
    return ErrorCode::InvariantViolated;
}

}  // namespace

TEST(Io, CircuitRoundTrip) {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit src = qdich::testing::random_source_circuit(rng, 3, 6);
        const std::string a = io::circuit_to_json(src);
        EXPECT_EQ(io::circuit_to_json(io::circuit_from_json(a)), a);

        auto [sub, chains] = hadamard_substitute(preprocess(src));
        const std::string b = io::circuit_to_json(sub);
        const Circuit back = io::circuit_from_json(b);
        EXPECT_EQ(io::circuit_to_json(back), b);
        EXPECT_EQ(back.post_select_at, sub.post_select_at);
        EXPECT_EQ(back.output_map, sub.output_map);
    }
}

TEST(Io, GeneralGatesRoundTrip) {
    Circuit c = Circuit::pluses(2);
    c.gates = {Gate::xrot(0, 0.1234567890123456789), {GeneralDiag1{{std::polar(1.0, 0.3), std::polar(1.0, -2.0)}}, {1}},
               {GeneralDiag2{{1.0, std::polar(1.0, 1.0 / 3), -1.0, std::polar(1.0, 0.7)}}, {1, 0}}};
    const std::string text = io::circuit_to_json(c);
    const Circuit back = io::circuit_from_json(text);
    EXPECT_EQ(std::get<XRot>(back.gates[0].kind).angle, 0.1234567890123456789);
    EXPECT_EQ(std::get<GeneralDiag2>(back.gates[2].kind).entries, std::get<GeneralDiag2>(c.gates[2].kind).entries);
    EXPECT_EQ(io::circuit_to_json(back), text);
}

TEST(Io, InstanceRoundTripIsLossless) {
    Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const QaoaInstance inst = qdich::testing::random_degree2_instance(rng, 9, 1 + trial % 3);
        const std::string text = io::instance_to_json(inst);
        const QaoaInstance back = io::instance_from_json(text);
        EXPECT_EQ(back.gammas, inst.gammas);
        EXPECT_EQ(back.betas, inst.betas);
        ASSERT_EQ(back.cost.terms.size(), inst.cost.terms.size());
        for (std::size_t i = 0; i < inst.cost.terms.size(); ++i) {
            EXPECT_EQ(back.cost.terms[i].table, inst.cost.terms[i].table);
            EXPECT_EQ(back.cost.terms[i].support, inst.cost.terms[i].support);
        }
        EXPECT_EQ(io::instance_to_json(back), text);
    }
    const Circuit src = qdich::testing::random_source_circuit(rng, 3, 5);
    const QaoaInstance compiled = compile(src);
    const std::string text = io::instance_to_json(compiled);
    const QaoaInstance back = io::instance_from_json(text);
    EXPECT_TRUE(back.cost.integer_valued);
    EXPECT_EQ(back.post_select, compiled.post_select);
    EXPECT_EQ(back.output_map, compiled.output_map);
    EXPECT_EQ(io::instance_to_json(back), text);
}

TEST(Io, IqpRoundTrip) {
    Rng rng(53);
    const IqpInstance inst = compile_iqp(qdich::testing::random_source_circuit(rng, 3, 5));
    const std::string text = io::iqp_to_json(inst);
    EXPECT_EQ(io::iqp_to_json(io::iqp_from_json(text)), text);
}

TEST(Io, MinimalCircuit) {
    const Circuit c = io::circuit_from_json(R"({"n": 2, "gates": [{"kind": "CZ", "qubits": [0, 1]}]})");
    EXPECT_EQ(c.n_qubits, 2);
    EXPECT_EQ(c.prep, (std::vector<Prep>{Prep::Zero, Prep::Zero}));
    EXPECT_EQ(c.gates.size(), 1U);
}

TEST(Io, Rejections) {
    EXPECT_EQ(code_of("{"), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of("[1]"), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of(R"({"format": "other", "n": 1})"), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of(R"({"n": 1, "gates": [{"kind": "Toffoli", "qubits": [0]}]})"), ErrorCode::UnsupportedGate);
    EXPECT_EQ(code_of(R"({"n": 1, "gates": [{"kind": "CZ", "qubits": [0]}]})"), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of(R"({"n": 1, "gates": [{"kind": "H", "qubits": [3]}]})"), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of(R"({"n": 2, "prep": ["plus"]})"), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of(R"({"n": 2, "output_map": {"x": 1}})"), ErrorCode::InvalidInput);
    EXPECT_THROW(io::instance_from_json(R"({"n": 2, "p": 1, "terms": [], "gammas": [], "betas": [0]})"), Error);
}
