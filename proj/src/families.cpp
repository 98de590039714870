#include "dynpdr/families.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace dynpdr::families {

AigBuilder::AigBuilder(std::size_t num_inputs, std::size_t num_latches)
    : inputs_(num_inputs), latches_(num_latches),
      next_var_(static_cast<std::uint32_t>(1 + num_inputs + num_latches)), latch_defs_(num_latches) {
  for (std::size_t i = 0; i < num_latches; ++i) latch_defs_[i] = {latch(i), 0, 0};
}

AigLit AigBuilder::land(AigLit a, AigLit b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return 0;
  if (a == 1) return b;
  if (a == b) return a;
  if ((a ^ 1) == b) return 0;
  const std::uint64_t key = (std::uint64_t{a} << 32) | b;
  if (auto it = strash_.find(key); it != strash_.end()) return it->second;
  const AigLit lhs = 2 * next_var_++;
  ands_.push_back({lhs, b, a});
  strash_.emplace(key, lhs);
  return lhs;
}

AigLit AigBuilder::land_all(const std::vector<AigLit>& lits) {
  AigLit acc = 1;
  for (AigLit l : lits) acc = land(acc, l);
  return acc;
}

AigLit AigBuilder::lor_all(const std::vector<AigLit>& lits) {
  AigLit acc = 0;
  for (AigLit l : lits) acc = lor(acc, l);
  return acc;
}

void AigBuilder::set_latch(std::size_t i, AigLit next, int reset) {
  AigLit r = reset == 0 ? 0 : reset == 1 ? 1 : latch(i);
  latch_defs_.at(i) = {latch(i), next, r};
}

AigerCircuit AigBuilder::build() const {
  AigerCircuit c;
  c.max_var_index = next_var_ - 1;
  for (std::size_t j = 0; j < inputs_; ++j) c.inputs.push_back(input(j));
  c.latches = latch_defs_;
  c.outputs = outputs_;
  c.bad = bad_;
  c.ands = ands_;
  return c;
}

AigerCircuit toggle(int reset, bool bad_value) {
  AigBuilder b(0, 1);
  b.set_latch(0, b.latch(0) ^ 1, reset);
  b.add_bad(bad_value ? b.latch(0) : b.latch(0) ^ 1);
  return b.build();
}

namespace {

// Literal for "the latches starting at `first` hold value v".
AigLit equals_const(AigBuilder& b, std::size_t first, unsigned bits, std::uint64_t v) {
  std::vector<AigLit> lits;
  for (unsigned i = 0; i < bits; ++i) lits.push_back(b.latch(first + i) ^ (((v >> i) & 1) ? 0 : 1));
  return b.land_all(lits);
}

// Next-state functions of a wrap-around incrementer on latches
// [first, first+bits), stepping when `step` holds.
std::vector<AigLit> increment(AigBuilder& b, std::size_t first, unsigned bits, std::uint64_t wrap, AigLit step) {
  AigLit at_top = equals_const(b, first, bits, wrap - 1);
  AigLit carry = step;
  std::vector<AigLit> next;
  for (unsigned i = 0; i < bits; ++i) {
    AigLit x = b.latch(first + i);
    AigLit sum = b.lxor(x, carry);
    carry = b.land(x, carry);
    next.push_back(b.mux(b.land(step, at_top), 0, sum));
  }
  return next;
}

}  // namespace

AigerCircuit counter(unsigned bits, std::uint64_t wrap, std::uint64_t bad_value, bool enable) {
  AigBuilder b(enable ? 1 : 0, bits);
  std::vector<AigLit> next = increment(b, 0, bits, wrap, enable ? b.input(0) : 1);
  for (unsigned i = 0; i < bits; ++i) b.set_latch(i, next[i], 0);
  b.add_bad(equals_const(b, 0, bits, bad_value));
  return b.build();
}

AigerCircuit shift_chain(unsigned n, bool safe) {
  AigBuilder b(1, n);
  AigLit feed = safe ? b.land(b.input(0), b.latch(0) ^ 1) : b.input(0);
  b.set_latch(0, feed, 0);
  for (unsigned i = 1; i < n; ++i) b.set_latch(i, b.latch(i - 1), 0);
  if (safe) {
    std::vector<AigLit> pairs;
    for (unsigned i = 0; i + 1 < n; ++i) pairs.push_back(b.land(b.latch(i), b.latch(i + 1)));
    b.add_bad(b.lor_all(pairs));
  } else {
    std::vector<AigLit> all;
    for (unsigned i = 0; i < n; ++i) all.push_back(b.latch(i));
    b.add_bad(b.land_all(all));
  }
  return b.build();
}

AigerCircuit random_netlist(unsigned latches, unsigned inputs, unsigned gates, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return static_cast<std::size_t>(rng() % n); };
  AigBuilder b(inputs, latches);
  std::vector<AigLit> pool;
  for (unsigned j = 0; j < inputs; ++j) pool.push_back(b.input(j));
  for (unsigned i = 0; i < latches; ++i) pool.push_back(b.latch(i));
  for (unsigned g = 0; g < gates; ++g) {
    AigLit x = pool[pick(pool.size())] ^ static_cast<AigLit>(rng() & 1);
    AigLit y = pool[pick(pool.size())] ^ static_cast<AigLit>(rng() & 1);
    AigLit z = b.land(x, y);
    if (z > 1) pool.push_back(z);
  }
  for (unsigned i = 0; i < latches; ++i) {
    AigLit next = pool[pick(pool.size())] ^ static_cast<AigLit>(rng() & 1);
    const std::uint64_t r = rng() % 8;
    b.set_latch(i, next, r < 4 ? 0 : r < 7 ? 1 : -1);
  }
  std::vector<AigLit> conj;
  const std::size_t width = 1 + pick(std::min<unsigned>(3, latches + 1));
  for (std::size_t k = 0; k < width; ++k) conj.push_back(pool[pick(pool.size())] ^ static_cast<AigLit>(rng() & 1));
  b.add_bad(b.land_all(conj));
  return b.build();
}

namespace {

// v < k for the unsigned word v (lsb first).
AigLit less_than(AigBuilder& b, const std::vector<AigLit>& v, std::uint64_t k) {
  if (k >> v.size()) return 1;
  AigLit lt = 0;
  for (std::size_t i = 0; i < v.size(); ++i) lt = ((k >> i) & 1) ? b.lor(v[i] ^ 1, lt) : b.land(v[i] ^ 1, lt);
  return lt;
}

AigLit word_equals(AigBuilder& b, const std::vector<AigLit>& v, std::uint64_t k) {
  std::vector<AigLit> lits;
  for (std::size_t i = 0; i < v.size(); ++i) lits.push_back(v[i] ^ (((k >> i) & 1) ? 0 : 1));
  return b.land_all(lits);
}

}  // namespace

AigerCircuit ladder(unsigned bits, unsigned rungs, std::uint64_t wrap, bool safe) {
  const std::uint64_t top = (std::uint64_t{1} << bits) - 1;
  if (wrap == 0 || wrap > top) throw std::invalid_argument("ladder: wrap must be in [1, 2^bits - 1]");
  AigBuilder b(rungs + bits, std::size_t{rungs} * bits + 1);
  std::vector<AigLit> data;
  for (unsigned i = 0; i < bits; ++i) data.push_back(b.input(rungs + i));
  const AigLit data_ok = less_than(b, data, wrap);
  // the unsafe variant lets the last rung load a value two steps below top
  const AigLit data_leak = word_equals(b, data, top >= 2 ? top - 2 : 0);

  std::vector<AigLit> at_top;
  for (unsigned r = 0; r < rungs; ++r) {
    std::vector<AigLit> x;
    for (unsigned i = 0; i < bits; ++i) x.push_back(b.latch(r * bits + i));
    const AigLit load = b.input(r);
    const AigLit accept = (!safe && r + 1 == rungs) ? b.lor(data_ok, data_leak) : data_ok;
    const AigLit last = word_equals(b, x, wrap - 1);
    AigLit carry = 1;
    for (unsigned i = 0; i < bits; ++i) {
      const AigLit inc = b.lxor(x[i], carry);
      carry = b.land(x[i], carry);
      const AigLit count = b.mux(last, 0, inc);
      const AigLit loaded = b.mux(accept, data[i], x[i]);
      b.set_latch(r * bits + i, b.mux(load, loaded, count), 0);
    }
    at_top.push_back(word_equals(b, x, top));
  }
  const std::size_t flag = std::size_t{rungs} * bits;
  b.set_latch(flag, b.lor(b.latch(flag), b.lor_all(at_top)), 0);
  b.add_bad(b.latch(flag));
  return b.build();
}

std::vector<NamedCircuit> hard_family() {
  std::vector<NamedCircuit> out;
  std::mt19937_64 rng(20);
  for (unsigned bits : {7u, 8u}) {
    for (unsigned rungs : {3u, 4u}) {
      const std::uint64_t span = std::uint64_t{1} << bits;
      std::uniform_int_distribution<std::uint64_t> pick(span / 2 + 1, span - 2);
      for (int n = 0; n < 2; ++n) {
        const std::uint64_t wrap = pick(rng);
        out.push_back({"ladder_" + std::to_string(bits) + "x" + std::to_string(rungs) + "_w" + std::to_string(wrap),
                       ladder(bits, rungs, wrap, true)});
      }
    }
  }
  return out;
}

std::vector<NamedCircuit> small_corpus(std::size_t count, unsigned max_bits, std::uint64_t seed) {
  std::vector<NamedCircuit> out;
  auto add = [&](std::string name, AigerCircuit c) {
    if (c.latches.size() + c.inputs.size() <= max_bits) out.push_back({std::move(name), std::move(c)});
  };
  for (int r : {0, 1, -1}) {
    for (bool v : {false, true}) add("toggle_r" + std::to_string(r) + "_b" + std::to_string(v), toggle(r, v));
  }
  for (unsigned bits = 2; bits <= 5; ++bits) {
    const std::uint64_t top = std::uint64_t{1} << bits;
    for (std::uint64_t wrap : {top / 2 + 1, top - 1, top}) {
      for (std::uint64_t bad : {wrap - 1, wrap, top - 1}) {
        if (bad >= top) continue;
        for (bool en : {false, true}) {
          add("counter_" + std::to_string(bits) + "_w" + std::to_string(wrap) + "_b" + std::to_string(bad) +
                  (en ? "_en" : ""),
              counter(bits, wrap, bad, en));
        }
      }
    }
  }
  for (unsigned n = 2; n <= 8; ++n) {
    add("shift_" + std::to_string(n) + "_safe", shift_chain(n, true));
    add("shift_" + std::to_string(n) + "_unsafe", shift_chain(n, false));
  }
  for (unsigned bits = 2; bits <= 4; ++bits) {
    for (unsigned rungs = 1; rungs <= 3; ++rungs) {
      const std::uint64_t top = (std::uint64_t{1} << bits) - 1;
      for (std::uint64_t wrap : {top / 2 + 1, top - 1}) {
        const std::string tag = std::to_string(bits) + "x" + std::to_string(rungs) + "_w" + std::to_string(wrap);
        add("ladder_" + tag + "_safe", ladder(bits, rungs, wrap, true));
        add("ladder_" + tag + "_unsafe", ladder(bits, rungs, wrap, false));
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::size_t k = 0;
  while (out.size() < count) {
    const unsigned latches = 1 + static_cast<unsigned>(rng() % std::min<unsigned>(10, max_bits));
    const unsigned inputs = static_cast<unsigned>(rng() % (max_bits - latches + 1));
    const unsigned gates = latches + inputs + static_cast<unsigned>(rng() % 30);
    add("random_" + std::to_string(k++), random_netlist(latches, std::min(inputs, 4u), gates, rng()));
  }
  return out;
}

std::vector<NamedCircuit> default_corpus() { return small_corpus(240, 16, 1); }

std::vector<NamedCircuit> sub_corpus(std::size_t n) {
  std::vector<NamedCircuit> all = default_corpus();
  std::vector<NamedCircuit> out;
  if (n == 0) return out;
  const std::size_t stride = std::max<std::size_t>(1, all.size() / n);
  for (std::size_t i = 0; i < all.size() && out.size() < n; i += stride) out.push_back(all[i]);
  return out;
}

}  // namespace dynpdr::families
