#pragma once

#include <string>

#include "qdich/circuit.hpp"
#include "qdich/compiler.hpp"
#include "qdich/oracle.hpp"

// JSON formats, all tagged "format": "qdich-v1". Qubit indices are 0-based;
// in bitstrings and amplitude indices qubit 0 is the leftmost / most
// significant position.
namespace qdich::io {

inline constexpr const char* kFormat = "qdich-v1";

std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

std::string instance_to_json(const QaoaInstance& instance);
QaoaInstance instance_from_json(const std::string& text);

std::string iqp_to_json(const IqpInstance& instance);
IqpInstance iqp_from_json(const std::string& text);

/// { "outcomes": {bitstring: prob}, "conditioning_probability": x, ... }
std::string distribution_to_json(const Distribution& dist);

std::string report_to_json(const CompileReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace qdich::io
