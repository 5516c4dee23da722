#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "qdich/compiler.hpp"
#include "qdich/error.hpp"
#include "qdich/io.hpp"
#include "qdich/oracle.hpp"
#include "qdich/tnsim.hpp"

namespace py = pybind11;
using namespace qdich;

namespace {

Backend backend_of(const std::string& name) {
    if (name == "exact") return Backend::Exact;
    if (name == "float") return Backend::Float;
    throw Error(ErrorCode::InvalidInput, "unknown backend '" + name + "'");
}

py::dict gadget(const std::string& f, double lambda_phase) {
    const GadgetSpec g = gadget_solve(SingleQubitUnitary::named(f), lambda_phase);
    py::dict d;
    d["r0"] = g.r0;
    d["r1"] = g.r1;
    d["lambda"] = g.lambda;
    d["w"] = std::vector<std::complex<double>>(g.w.begin(), g.w.end());
    if (g.exact_w) {
        std::vector<std::string> w;
        for (const auto& e : *g.exact_w) w.push_back(e.to_string());
        d["exact_w"] = w;
    } else {
        d["exact_w"] = py::none();
    }
    return d;
}

std::pair<std::string, std::string> compile_json(const std::string& circuit, bool monotone, bool iqp) {
    const Circuit c = io::circuit_from_json(circuit);
    CompileReport report;
    if (iqp) {
        const IqpInstance inst = compile_iqp(c, monotone, &report);
        return {io::iqp_to_json(inst), io::report_to_json(report)};
    }
    const QaoaInstance inst = compile(c, monotone, &report);
    return {io::instance_to_json(inst), io::report_to_json(report)};
}

std::string oracle_json(const std::string& circuit, const std::string& backend) {
    return io::distribution_to_json(post_selected_distribution(io::circuit_from_json(circuit), backend_of(backend)));
}

std::string instance_circuit_json(const std::string& instance) {
    return io::circuit_to_json(qaoa_to_circuit(io::instance_from_json(instance)));
}

double multiplicative(const std::vector<double>& d, const std::vector<double>& d2) {
    Distribution a;
    Distribution b;
    a.probabilities = d;
    b.probabilities = d2;
    const MultiplicativeError c = multiplicative_error(a, b);
    return c.infinite ? std::numeric_limits<double>::infinity() : c.value;
}

}  // namespace

PYBIND11_MODULE(_qdich, m) {
    m.doc() = "Native core of qdich; the qdich package wraps these JSON-level entry points.";

    static py::exception<Error> error(m, "QdichError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object instance = py::reinterpret_borrow<py::object>(error)(py::str(e.what()));
            instance.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), instance.ptr());
        }
    });

    m.def("gadget", &gadget, py::arg("f"), py::arg("lambda_phase") = 0.0);
    m.def("compile", &compile_json, py::arg("circuit"), py::arg("monotone") = false, py::arg("iqp") = false);
    m.def("oracle", &oracle_json, py::arg("circuit"), py::arg("backend") = "exact");
    m.def("instance_circuit", &instance_circuit_json, py::arg("instance"));
    m.def("marginal", [](const std::string& instance, const std::vector<int>& subset, const std::vector<int>& outcome) {
        return marginal(io::instance_from_json(instance), subset, outcome);
    }, py::arg("instance"), py::arg("subset"), py::arg("outcome"));
    m.def("sample", [](const std::string& instance, std::uint64_t seed, std::size_t count) {
        return sample(io::instance_from_json(instance), seed, count);
    }, py::arg("instance"), py::arg("seed"), py::arg("count"));
    m.def("cut_width", [](const std::string& instance) {
        return cut_width(io::instance_from_json(instance)).cut_width;
    }, py::arg("instance"));
    m.def("multiplicative_error", &multiplicative, py::arg("d"), py::arg("d2"));
}
