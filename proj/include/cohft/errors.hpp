#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cohft {

// Malformed data (bad indices, wrong sizes) — distinct from axiom failure.
struct StructureError : std::runtime_error {
  explicit StructureError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input that parses but violates a mathematical contract.
struct AxiomError : std::runtime_error {
  std::vector<std::string> violations;
  AxiomError(const std::string& msg, std::vector<std::string> v)
      : std::runtime_error(msg), violations(std::move(v)) {}
};

struct StabilityError : std::runtime_error {
  explicit StabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LabelError : std::runtime_error {
  explicit LabelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Semisimple decomposition could not reach the requested residual tolerance.
struct SemisimpleError : std::runtime_error {
  double worst_residual;
  SemisimpleError(const std::string& msg, double residual)
      : std::runtime_error(msg), worst_residual(residual) {}
};

}  // namespace cohft
