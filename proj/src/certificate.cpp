#include "dynpdr/certificate.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace dynpdr {

void write_witness(std::ostream& os, const AigerCircuit& c, const std::vector<TraceStep>& trace,
                   std::size_t property_index) {
  os << "1\n";
  os << 'b' << property_index << '\n';
  std::string init(c.latches.size(), 'x');
  if (!trace.empty()) {
    for (Lit l : trace.front().state) init[l.var() - 1] = l.negated() ? '0' : '1';
  }
  os << init << '\n';
  const Var first_input = static_cast<Var>(1 + c.latches.size());
  for (const TraceStep& step : trace) {
    std::string line(c.inputs.size(), '0');
    for (Lit l : step.input) line[l.var() - first_input] = l.negated() ? '0' : '1';
    os << line << '\n';
  }
  os << ".\n";
}

AigerCircuit invariant_circuit(const AigerCircuit& c, const std::vector<Clause>& inv) {
  AigerCircuit out = c;
  out.bad.clear();
  out.outputs.clear();
  std::uint32_t next = c.max_var_index + 1;
  auto land = [&](AigLit a, AigLit b) {
    if (a == 0 || b == 0) return AigLit{0};
    if (a == 1) return b;
    if (b == 1) return a;
    AigLit lhs = 2 * next++;
    out.ands.push_back({lhs, std::max(a, b), std::min(a, b)});
    return lhs;
  };
  AigLit all = 1;
  for (const Clause& cl : inv) {
    // clause = ¬(∧ ¬l)
    AigLit none = 1;
    for (Lit l : cl) {
      AigLit latch = c.latches.at(l.var() - 1).current;
      none = land(none, l.negated() ? latch : latch ^ 1);
    }
    all = land(all, none ^ 1);
  }
  out.max_var_index = next - 1;
  out.outputs.push_back(all);
  return out;
}

void write_invariant_text(std::ostream& os, const std::vector<Clause>& inv) {
  for (const Clause& cl : inv) {
    for (Lit l : cl) os << (l.negated() ? "-" : "") << l.var() << ' ';
    os << "0\n";
  }
}

}  // namespace dynpdr
