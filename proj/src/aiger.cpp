#include "dynpdr/aiger.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dynpdr {

AigerError::AigerError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " at byte " + std::to_string(offset) +
                         ": " + what),
      kind_(kind),
      offset_(offset) {}

const char* to_string(AigerError::Kind kind) {
  using K = AigerError::Kind;
  switch (kind) {
    case K::MalformedHeader: return "MalformedHeader";
    case K::MalformedLine: return "MalformedLine";
    case K::UndefinedLiteral: return "UndefinedLiteral";
    case K::NonMonotonicGate: return "NonMonotonicGate";
    case K::DuplicateDefinition: return "DuplicateDefinition";
    case K::TruncatedFile: return "TruncatedFile";
    case K::UnsupportedFeature: return "UnsupportedFeature";
    case K::NoProperty: return "NoProperty";
    case K::BadPropertyIndex: return "BadPropertyIndex";
    case K::Io: return "Io";
  }
  return "?";
}

namespace {

using K = AigerError::Kind;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  int peek() const { return at_end() ? -1 : bytes_[pos_]; }
  std::uint8_t get(const char* what) {
    if (at_end()) throw AigerError(K::TruncatedFile, pos_, std::string("expected ") + what);
    return bytes_[pos_++];
  }

  std::uint32_t number(const char* what, K kind = K::MalformedLine) {
    if (at_end()) throw AigerError(K::TruncatedFile, pos_, std::string("expected ") + what);
    if (peek() < '0' || peek() > '9') {
      throw AigerError(kind, pos_, std::string("expected ") + what);
    }
    std::uint64_t v = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(get(what) - '0');
      if (v > 0x7fffffffu) throw AigerError(kind, pos_, std::string(what) + " out of range");
    }
    return static_cast<std::uint32_t>(v);
  }

  void expect(char c, const char* what, K kind = K::MalformedLine) {
    if (at_end()) throw AigerError(K::TruncatedFile, pos_, std::string("expected ") + what);
    if (peek() != c) throw AigerError(kind, pos_, std::string("expected ") + what);
    ++pos_;
  }

  // LEB128-style delta used by the binary and-gate section.
  std::uint32_t varint() {
    std::uint64_t v = 0;
    unsigned shift = 0;
    while (true) {
      std::uint8_t b = get("binary delta");
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) break;
      shift += 7;
      if (shift > 35) throw AigerError(K::MalformedLine, pos_, "delta encoding too long");
    }
    if (v > 0xffffffffu) throw AigerError(K::MalformedLine, pos_, "delta out of range");
    return static_cast<std::uint32_t>(v);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct Header {
  bool binary = false;
  std::uint32_t m = 0, i = 0, l = 0, o = 0, a = 0, b = 0, c = 0, j = 0, f = 0;
};

Header read_header(Reader& r) {
  Header h;
  char magic[3];
  for (char& ch : magic) ch = static_cast<char>(r.get("header"));
  std::string_view mv(magic, 3);
  if (mv == "aag") {
    h.binary = false;
  } else if (mv == "aig") {
    h.binary = true;
  } else {
    throw AigerError(K::MalformedHeader, 0, "expected 'aag' or 'aig'");
  }
  std::uint32_t* fields[] = {&h.m, &h.i, &h.l, &h.o, &h.a, &h.b, &h.c, &h.j, &h.f};
  for (int n = 0; n < 9; ++n) {
    if (n >= 5 && r.peek() == '\n') break;
    r.expect(' ', "space in header", K::MalformedHeader);
    *fields[n] = r.number("header field", K::MalformedHeader);
  }
  r.expect('\n', "end of header", K::MalformedHeader);
  if (h.c || h.j || h.f) {
    throw AigerError(K::UnsupportedFeature, 0,
                     "invariant constraints, justice and fairness sections are not supported");
  }
  std::uint64_t defined = std::uint64_t{h.i} + h.l + h.a;
  if (h.binary ? defined != h.m : defined > h.m) {
    throw AigerError(K::MalformedHeader, 0, "M does not match I + L + A");
  }
  return h;
}

class Definitions {
 public:
  explicit Definitions(std::uint32_t max_var) : defined_(max_var + 1, false), max_var_(max_var) {}

  void define(AigLit lit, std::size_t offset) {
    if (lit & 1u) throw AigerError(K::MalformedLine, offset, "defined literal must be even");
    if (lit == 0) throw AigerError(K::MalformedLine, offset, "cannot redefine constant");
    check_range(lit, offset);
    if (defined_[lit / 2]) {
      throw AigerError(K::DuplicateDefinition, offset,
                       "variable " + std::to_string(lit / 2) + " defined twice");
    }
    defined_[lit / 2] = true;
  }

  void check_range(AigLit lit, std::size_t offset) const {
    if (lit / 2 > max_var_) {
      throw AigerError(K::UndefinedLiteral, offset,
                       "literal " + std::to_string(lit) + " exceeds maximum variable index");
    }
  }

  void check_defined(AigLit lit, std::size_t offset) const {
    check_range(lit, offset);
    if (lit > 1 && !defined_[lit / 2]) {
      throw AigerError(K::UndefinedLiteral, offset,
                       "literal " + std::to_string(lit) + " is never defined");
    }
  }

 private:
  std::vector<bool> defined_;
  std::uint32_t max_var_;
};

void skip_trailer(Reader& r) {
  // Symbol table and comment section; contents are not needed.
  while (!r.at_end()) {
    std::size_t start = r.pos();
    int ch = r.peek();
    if (ch == 'c') {
      return;
    }
    if (ch == 'i' || ch == 'l' || ch == 'o' || ch == 'b' || ch == 'c' || ch == 'j' || ch == 'f') {
      r.get("symbol");
      r.number("symbol index");
      r.expect(' ', "space before symbol name");
      while (!r.at_end() && r.peek() != '\n') r.get("symbol");
      if (!r.at_end()) r.get("newline");
      continue;
    }
    if (ch == '\n') {
      r.get("newline");
      continue;
    }
    throw AigerError(K::MalformedLine, start, "unexpected content after circuit definition");
  }
}

}  // namespace

AigerCircuit parse_aiger(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Header h = read_header(r);
  AigerCircuit c;
  c.max_var_index = h.m;
  Definitions defs(h.m);

  for (std::uint32_t n = 0; n < h.i; ++n) {
    AigLit lit = 2 * (n + 1);
    if (!h.binary) {
      std::size_t at = r.pos();
      lit = r.number("input literal");
      r.expect('\n', "end of input line");
      defs.define(lit, at);
    } else {
      defs.define(lit, r.pos());
    }
    c.inputs.push_back(lit);
  }

  struct PendingLatch {
    std::size_t offset;
  };
  std::vector<PendingLatch> latch_offsets;
  for (std::uint32_t n = 0; n < h.l; ++n) {
    std::size_t at = r.pos();
    AigLatch latch{};
    if (h.binary) {
      latch.current = 2 * (h.i + n + 1);
    } else {
      latch.current = r.number("latch literal");
      r.expect(' ', "space in latch line");
    }
    defs.define(latch.current, at);
    latch.next = r.number("latch next literal");
    latch.reset = 0;
    if (r.peek() == ' ') {
      r.get("space");
      latch.reset = r.number("latch reset");
      if (latch.reset != 0 && latch.reset != 1 && latch.reset != latch.current) {
        throw AigerError(K::MalformedLine, at, "latch reset must be 0, 1 or the latch literal");
      }
    }
    r.expect('\n', "end of latch line");
    latch_offsets.push_back({at});
    c.latches.push_back(latch);
  }

  std::vector<std::size_t> output_offsets, bad_offsets;
  for (std::uint32_t n = 0; n < h.o; ++n) {
    output_offsets.push_back(r.pos());
    c.outputs.push_back(r.number("output literal"));
    r.expect('\n', "end of output line");
  }
  for (std::uint32_t n = 0; n < h.b; ++n) {
    bad_offsets.push_back(r.pos());
    c.bad.push_back(r.number("bad literal"));
    r.expect('\n', "end of bad line");
  }

  std::vector<std::size_t> and_offsets;
  for (std::uint32_t n = 0; n < h.a; ++n) {
    std::size_t at = r.pos();
    AigAnd g{};
    if (h.binary) {
      g.lhs = 2 * (h.i + h.l + n + 1);
      std::uint32_t d0 = r.varint();
      if (d0 == 0 || d0 > g.lhs) {
        throw AigerError(K::NonMonotonicGate, at, "first delta out of range");
      }
      g.rhs0 = g.lhs - d0;
      std::uint32_t d1 = r.varint();
      if (d1 > g.rhs0) throw AigerError(K::NonMonotonicGate, at, "second delta out of range");
      g.rhs1 = g.rhs0 - d1;
    } else {
      g.lhs = r.number("and literal");
      r.expect(' ', "space in and line");
      g.rhs0 = r.number("and operand");
      r.expect(' ', "space in and line");
      g.rhs1 = r.number("and operand");
      r.expect('\n', "end of and line");
    }
    defs.define(g.lhs, at);
    if (g.rhs0 >= g.lhs || g.rhs1 >= g.lhs) {
      throw AigerError(K::NonMonotonicGate, at,
                       "and gate " + std::to_string(g.lhs) + " is not above its operands");
    }
    and_offsets.push_back(at);
    c.ands.push_back(g);
  }

  for (std::size_t n = 0; n < c.latches.size(); ++n) {
    defs.check_defined(c.latches[n].next, latch_offsets[n].offset);
  }
  for (std::size_t n = 0; n < c.outputs.size(); ++n) defs.check_defined(c.outputs[n], output_offsets[n]);
  for (std::size_t n = 0; n < c.bad.size(); ++n) defs.check_defined(c.bad[n], bad_offsets[n]);
  for (std::size_t n = 0; n < c.ands.size(); ++n) {
    defs.check_defined(c.ands[n].rhs0, and_offsets[n]);
    defs.check_defined(c.ands[n].rhs1, and_offsets[n]);
  }

  skip_trailer(r);
  return c;
}

AigerCircuit parse_aiger(std::string_view text) {
  return parse_aiger(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

AigerCircuit read_aiger_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AigerError(K::Io, 0, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_aiger(bytes);
}

namespace {

void write_latch_tail(std::ostream& os, const AigLatch& l) {
  os << l.next;
  if (l.reset != 0) os << ' ' << l.reset;
  os << '\n';
}

void write_header(std::ostream& os, const char* magic, const AigerCircuit& c) {
  os << magic << ' ' << c.max_var_index << ' ' << c.inputs.size() << ' ' << c.latches.size()
     << ' ' << c.outputs.size() << ' ' << c.ands.size();
  if (!c.bad.empty()) os << ' ' << c.bad.size();
  os << '\n';
}

}  // namespace

std::string write_aag(const AigerCircuit& c) {
  std::ostringstream os;
  write_header(os, "aag", c);
  for (AigLit i : c.inputs) os << i << '\n';
  for (const AigLatch& l : c.latches) {
    os << l.current << ' ';
    write_latch_tail(os, l);
  }
  for (AigLit o : c.outputs) os << o << '\n';
  for (AigLit b : c.bad) os << b << '\n';
  for (const AigAnd& g : c.ands) os << g.lhs << ' ' << g.rhs0 << ' ' << g.rhs1 << '\n';
  return os.str();
}

std::vector<std::uint8_t> write_aig(const AigerCircuit& c) {
  const std::uint32_t ni = static_cast<std::uint32_t>(c.inputs.size());
  const std::uint32_t nl = static_cast<std::uint32_t>(c.latches.size());
  for (std::uint32_t n = 0; n < ni; ++n) {
    if (c.inputs[n] != 2 * (n + 1)) throw LogicError("write_aig: inputs not in binary order");
  }
  for (std::uint32_t n = 0; n < nl; ++n) {
    if (c.latches[n].current != 2 * (ni + n + 1)) {
      throw LogicError("write_aig: latches not in binary order");
    }
  }
  std::ostringstream os;
  write_header(os, "aig", c);
  for (const AigLatch& l : c.latches) write_latch_tail(os, l);
  for (AigLit o : c.outputs) os << o << '\n';
  for (AigLit b : c.bad) os << b << '\n';
  std::string head = os.str();
  std::vector<std::uint8_t> out(head.begin(), head.end());
  auto put = [&](std::uint32_t x) {
    while (x & ~0x7fu) {
      out.push_back(static_cast<std::uint8_t>((x & 0x7f) | 0x80));
      x >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(x));
  };
  for (std::size_t n = 0; n < c.ands.size(); ++n) {
    const AigAnd& g = c.ands[n];
    if (g.lhs != 2 * (ni + nl + n + 1)) throw LogicError("write_aig: gates not in binary order");
    AigLit hi = std::max(g.rhs0, g.rhs1), lo = std::min(g.rhs0, g.rhs1);
    put(g.lhs - hi);
    put(hi - lo);
  }
  return out;
}

std::vector<AigLit> property_literals(const AigerCircuit& c, PropertySelection sel) {
  const std::vector<AigLit>& all = c.bad.empty() ? c.outputs : c.bad;
  if (all.empty()) throw AigerError(K::NoProperty, 0, "circuit has neither outputs nor bad literals");
  if (!sel.index) return all;
  if (*sel.index >= all.size()) {
    throw AigerError(K::BadPropertyIndex, 0,
                     "property index " + std::to_string(*sel.index) + " out of range");
  }
  return {all[*sel.index]};
}

TransitionSystem to_transition_system(const AigerCircuit& c, PropertySelection sel) {
  std::vector<AigLit> props = property_literals(c, sel);
  TransitionSystem ts(c.latches.size(), c.inputs.size());

  std::vector<Var> var_map(c.max_var_index + 1, 0);
  for (std::size_t n = 0; n < c.inputs.size(); ++n) var_map[c.inputs[n] / 2] = ts.input_var(n);
  for (std::size_t n = 0; n < c.latches.size(); ++n) {
    var_map[c.latches[n].current / 2] = ts.state_var(n);
  }
  auto map = [&](AigLit a) { return Lit(var_map[a / 2], (a & 1u) != 0); };

  // ASCII files may list gates in any order; operands are always below lhs.
  std::vector<AigAnd> ands = c.ands;
  std::sort(ands.begin(), ands.end(), [](const AigAnd& x, const AigAnd& y) { return x.lhs < y.lhs; });
  for (const AigAnd& g : ands) var_map[g.lhs / 2] = ts.new_aux_var();
  for (const AigAnd& g : ands) ts.add_gate({var_map[g.lhs / 2], map(g.rhs0), map(g.rhs1)});

  std::vector<Lit> init;
  for (std::size_t n = 0; n < c.latches.size(); ++n) {
    const AigLatch& l = c.latches[n];
    ts.set_next(n, map(l.next));
    if (!l.uninitialized()) init.emplace_back(ts.state_var(n), l.reset == 0);
  }
  ts.set_init(Cube(std::move(init)));

  // bad = b1 ∨ ... ∨ bn = ¬(¬b1 ∧ ... ∧ ¬bn)
  Lit acc = ~map(props[0]);
  for (std::size_t n = 1; n < props.size(); ++n) {
    Var v = ts.new_aux_var();
    ts.add_gate({v, acc, ~map(props[n])});
    acc = Lit(v, false);
  }
  ts.set_bad(~acc);
  return ts;
}

}  // namespace dynpdr
