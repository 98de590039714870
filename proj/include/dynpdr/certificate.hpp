#pragma once

#include <iosfwd>
#include <vector>

#include "dynpdr/aiger.hpp"
#include "dynpdr/logic.hpp"

namespace dynpdr {

// AIGER witness: "1", the property ("b0"), initial latch values, one
// line of input bits per step, ".".
void write_witness(std::ostream& os, const AigerCircuit& c, const std::vector<TraceStep>& trace,
                   std::size_t property_index = 0);

// The circuit with its properties replaced by a single output that holds
// exactly when the invariant does, in ASCII AIGER.
AigerCircuit invariant_circuit(const AigerCircuit& c, const std::vector<Clause>& inv);

// One clause per line over latch indices, 1-based, negative for a
// complemented latch, terminated by 0.
void write_invariant_text(std::ostream& os, const std::vector<Clause>& inv);

}  // namespace dynpdr
