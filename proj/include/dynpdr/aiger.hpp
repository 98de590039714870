#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynpdr/logic.hpp"

namespace dynpdr {

// Raw AIGER literal: 2*index + complement bit; 0 is false, 1 is true.
using AigLit = std::uint32_t;

struct AigLatch {
  AigLit current;
  AigLit next;
  // 0, 1, or `current` itself for an uninitialized latch.
  AigLit reset = 0;

  bool uninitialized() const { return reset == current; }
  friend bool operator==(const AigLatch&, const AigLatch&) = default;
};

struct AigAnd {
  AigLit lhs;
  AigLit rhs0;
  AigLit rhs1;
  friend bool operator==(const AigAnd&, const AigAnd&) = default;
};

struct AigerCircuit {
  std::uint32_t max_var_index = 0;
  std::vector<AigLit> inputs;
  std::vector<AigLatch> latches;
  std::vector<AigLit> outputs;
  std::vector<AigLit> bad;
  std::vector<AigAnd> ands;

  friend bool operator==(const AigerCircuit&, const AigerCircuit&) = default;
};

class AigerError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedHeader,
    MalformedLine,
    UndefinedLiteral,
    NonMonotonicGate,
    DuplicateDefinition,
    TruncatedFile,
    UnsupportedFeature,
    NoProperty,
    BadPropertyIndex,
    Io,
  };

  AigerError(Kind kind, std::size_t offset, const std::string& what);

  Kind kind() const { return kind_; }
  // Byte offset into the input where the problem was detected.
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

const char* to_string(AigerError::Kind kind);

AigerCircuit parse_aiger(std::span<const std::uint8_t> bytes);
AigerCircuit parse_aiger(std::string_view text);
AigerCircuit read_aiger_file(const std::string& path);

std::string write_aag(const AigerCircuit& c);
// Binary form; requires the circuit to be in the canonical binary order
// (inputs, then latches, then gates on consecutive indices).
std::vector<std::uint8_t> write_aig(const AigerCircuit& c);

// Which property literal(s) form ¬P: all of them disjoined, or a single
// index into property_literals().
struct PropertySelection {
  std::optional<std::size_t> index;
};

// Bad literals if present, otherwise outputs.
std::vector<AigLit> property_literals(const AigerCircuit& c, PropertySelection sel = {});

TransitionSystem to_transition_system(const AigerCircuit& c, PropertySelection sel = {});

}  // namespace dynpdr
