// Copyright 2026 The avoidlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avoidlab/bits.hpp"
#include "avoidlab/errors.hpp"
#include "avoidlab/random.hpp"

namespace avoidlab {

enum class GateOp : std::uint8_t { Not, And, Or, Xor };

inline constexpr std::string_view op_name(GateOp op) {
  switch (op) {
    case GateOp::Not: return "NOT";
    case GateOp::And: return "AND";
    case GateOp::Or: return "OR";
    case GateOp::Xor: return "XOR";
  }
  return "?";
}

inline constexpr unsigned op_arity(GateOp op) { return op == GateOp::Not ? 1 : 2; }

inline constexpr bool apply_op(GateOp op, bool a, bool b) {
  switch (op) {
    case GateOp::Not: return !a;
    case GateOp::And: return a && b;
    case GateOp::Or: return a || b;
    case GateOp::Xor: return a != b;
  }
  return false;
}

/// A wire: input x_{index+1}, constant c{index}, or gate g_{index+1}.
struct WireRef {
  enum class Kind : std::uint8_t { Input, Const, Gate };
  Kind kind = Kind::Const;
  std::uint32_t index = 0;

  static constexpr WireRef input(std::uint32_t i) { return {Kind::Input, i}; }
  static constexpr WireRef constant(bool v) { return {Kind::Const, v ? 1u : 0u}; }
  static constexpr WireRef gate(std::uint32_t k) { return {Kind::Gate, k}; }

  std::string str() const {
    switch (kind) {
      case Kind::Input: return "x" + std::to_string(index + 1);
      case Kind::Const: return "c" + std::to_string(index);
      case Kind::Gate: return "g" + std::to_string(index + 1);
    }
    return "?";
  }

  friend bool operator==(const WireRef &, const WireRef &) = default;
};

struct Gate {
  GateOp op = GateOp::Not;
  WireRef a;
  WireRef b;  // unused for NOT

  friend bool operator==(const Gate &lhs, const Gate &rhs) {
    return lhs.op == rhs.op && lhs.a == rhs.a && (lhs.op == GateOp::Not || lhs.b == rhs.b);
  }
};

/*! \brief Multi-output Boolean circuit C : {0,1}^n -> {0,1}^m.
 *
 * Gates are stored in topological order; every operand refers to an input,
 * a constant, or an earlier gate. The constructor rejects anything else, so
 * a constructed Circuit is always well-formed and immutable.
 */
class Circuit {
 public:
  Circuit(std::string name, unsigned num_inputs, std::vector<Gate> gates, std::vector<WireRef> outputs)
      : name_(std::move(name)), n_(num_inputs), gates_(std::move(gates)), outputs_(std::move(outputs)) {
    if (n_ < 1) throw DomainError("circuit needs at least one input");
    if (outputs_.empty()) throw DomainError("circuit needs at least one output");
    for (std::size_t k = 0; k < gates_.size(); ++k) {
      check_ref(gates_[k].a, k, "gate g" + std::to_string(k + 1));
      if (op_arity(gates_[k].op) == 2) {
        check_ref(gates_[k].b, k, "gate g" + std::to_string(k + 1));
      } else {
        gates_[k].b = WireRef::constant(false);
      }
    }
    for (std::size_t j = 0; j < outputs_.size(); ++j) {
      check_ref(outputs_[j], gates_.size(), "output " + std::to_string(j + 1));
    }
  }

  const std::string &name() const { return name_; }
  unsigned num_inputs() const { return n_; }
  unsigned num_outputs() const { return static_cast<unsigned>(outputs_.size()); }
  /// Gate count; inputs, constants and output wiring are free.
  std::size_t size() const { return gates_.size(); }
  long stretch() const { return static_cast<long>(num_outputs()) - static_cast<long>(n_); }

  const std::vector<Gate> &gates() const { return gates_; }
  const std::vector<WireRef> &outputs() const { return outputs_; }

  friend bool operator==(const Circuit &, const Circuit &) = default;

 private:
  void check_ref(const WireRef &r, std::size_t gates_before, const std::string &where) const {
    switch (r.kind) {
      case WireRef::Kind::Input:
        if (r.index >= n_) throw DomainError(where + " references undefined input " + r.str());
        break;
      case WireRef::Kind::Const:
        if (r.index > 1) throw DomainError(where + " references bad constant");
        break;
      case WireRef::Kind::Gate:
        if (r.index >= gates_before) throw DomainError(where + " references " + r.str() + " out of topological order");
        break;
    }
  }

  std::string name_;
  unsigned n_;
  std::vector<Gate> gates_;
  std::vector<WireRef> outputs_;
};

namespace detail {

inline bool read_wire(const WireRef &r, const BitString &x, const std::vector<std::uint8_t> &values) {
  switch (r.kind) {
    case WireRef::Kind::Input: return x[r.index] != 0;
    case WireRef::Kind::Const: return r.index != 0;
    case WireRef::Kind::Gate: return values[r.index] != 0;
  }
  return false;
}

}  // namespace detail

inline BitString eval(const Circuit &c, const BitString &x) {
  if (x.size() != c.num_inputs()) {
    throw DomainError("input length " + std::to_string(x.size()) + " does not match circuit arity " +
                      std::to_string(c.num_inputs()));
  }
  std::vector<std::uint8_t> values(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto &g = c.gates()[k];
    const bool a = detail::read_wire(g.a, x, values);
    const bool b = op_arity(g.op) == 2 && detail::read_wire(g.b, x, values);
    values[k] = apply_op(g.op, a, b) ? 1 : 0;
  }
  BitString y(c.num_outputs());
  for (std::size_t j = 0; j < c.num_outputs(); ++j) y.set(j, detail::read_wire(c.outputs()[j], x, values));
  return y;
}

/// Largest input count for which whole-domain enumeration is permitted.
inline constexpr unsigned kDefaultEnumerationCap = 24;

/*! \brief Bit-parallel simulation over all 2^n inputs.
 *
 * Returns one packed table per output; word w bit b is the value on input
 * index 64*w + b (LSB = x1 encoding).
 */
inline std::vector<std::vector<std::uint64_t>> simulate_all(const Circuit &c,
                                                            unsigned cap = kDefaultEnumerationCap) {
  const unsigned n = c.num_inputs();
  if (n > cap) {
    throw CapacityError("enumerating 2^" + std::to_string(n) + " inputs exceeds the cap of 2^" + std::to_string(cap));
  }
  const std::size_t domain = std::size_t{1} << n;
  const std::size_t words = (domain + 63) / 64;
  const std::uint64_t tail_mask = domain >= 64 ? ~0ull : ((1ull << domain) - 1);
  using Table = std::vector<std::uint64_t>;

  std::vector<Table> inputs(n, Table(words));
  for (unsigned j = 0; j < n; ++j) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = 0;
      for (unsigned b = 0; b < 64; ++b) {
        const std::uint64_t idx = 64 * w + b;
        if (idx < domain && ((idx >> j) & 1u)) word |= 1ull << b;
      }
      inputs[j][w] = word;
    }
  }
  const Table zeros(words, 0);
  Table ones(words, ~0ull);
  ones.back() &= tail_mask;

  std::vector<Table> values;
  values.reserve(c.size());
  auto wire = [&](const WireRef &r) -> const Table & {
    switch (r.kind) {
      case WireRef::Kind::Input: return inputs[r.index];
      case WireRef::Kind::Const: return r.index ? ones : zeros;
      case WireRef::Kind::Gate: return values[r.index];
    }
    return zeros;
  };
  for (const auto &g : c.gates()) {
    const Table &a = wire(g.a);
    Table out(words);
    if (g.op == GateOp::Not) {
      for (std::size_t w = 0; w < words; ++w) out[w] = ~a[w];
      out.back() &= tail_mask;
    } else {
      const Table &b = wire(g.b);
      for (std::size_t w = 0; w < words; ++w) {
        switch (g.op) {
          case GateOp::And: out[w] = a[w] & b[w]; break;
          case GateOp::Or: out[w] = a[w] | b[w]; break;
          case GateOp::Xor: out[w] = a[w] ^ b[w]; break;
          case GateOp::Not: break;
        }
      }
    }
    values.push_back(std::move(out));
  }
  std::vector<Table> outs;
  outs.reserve(c.num_outputs());
  for (const auto &r : c.outputs()) outs.push_back(wire(r));
  return outs;
}

/// Truth table of output j (1-based).
inline TruthTable truth_table(const Circuit &c, unsigned j) {
  if (j < 1 || j > c.num_outputs()) {
    throw DomainError("output index " + std::to_string(j) + " out of range 1.." + std::to_string(c.num_outputs()));
  }
  const auto tables = simulate_all(c);
  const std::size_t domain = std::size_t{1} << c.num_inputs();
  BitString bits(domain);
  for (std::size_t i = 0; i < domain; ++i) bits.set(i, (tables[j - 1][i / 64] >> (i % 64)) & 1u);
  return TruthTable(c.num_inputs(), std::move(bits));
}

/// Each gate picks a uniform op and uniform operands among every wire defined before it.
inline Circuit random_circuit(unsigned n, unsigned m, unsigned num_gates, std::uint64_t seed) {
  if (n < 1 || m < 1) throw DomainError("random_circuit needs n >= 1 and m >= 1");
  Rng rng(derive_seed(seed, {0x63697263ull}));
  auto pick_wire = [&](std::size_t gates_so_far) {
    const std::uint64_t r = uniform_below(rng, n + 2 + gates_so_far);
    if (r < n) return WireRef::input(static_cast<std::uint32_t>(r));
    if (r < n + 2) return WireRef::constant(r == n + 1);
    return WireRef::gate(static_cast<std::uint32_t>(r - n - 2));
  };
  std::vector<Gate> gates;
  gates.reserve(num_gates);
  for (unsigned k = 0; k < num_gates; ++k) {
    Gate g;
    g.op = static_cast<GateOp>(uniform_below(rng, 4));
    g.a = pick_wire(k);
    g.b = op_arity(g.op) == 2 ? pick_wire(k) : WireRef::constant(false);
    gates.push_back(g);
  }
  std::vector<WireRef> outputs;
  outputs.reserve(m);
  for (unsigned j = 0; j < m; ++j) outputs.push_back(pick_wire(num_gates));
  return Circuit("random", n, std::move(gates), std::move(outputs));
}

inline std::size_t ceil_sqrt(std::size_t v) {
  std::size_t r = 0;
  while (r * r < v) ++r;
  return r;
}

/*! \brief Pads a circuit to at least ceil(sqrt(size)) inputs.
 *
 * Extra inputs are passed straight through to extra outputs, so
 * C'(x, z) = (C(x), z) and the stretch m - n is unchanged.
 */
inline Circuit pad_circuit(const Circuit &c) {
  const std::size_t want = ceil_sqrt(c.size());
  if (c.num_inputs() >= want) return c;
  const unsigned delta = static_cast<unsigned>(want - c.num_inputs());
  auto outputs = c.outputs();
  for (unsigned i = 0; i < delta; ++i) outputs.push_back(WireRef::input(c.num_inputs() + i));
  return Circuit(c.name() + "_pad", c.num_inputs() + delta, c.gates(), std::move(outputs));
}

/// t parallel copies of c on disjoint input blocks; block i owns outputs i*m .. i*m+m-1.
inline Circuit product_circuit(const Circuit &c, unsigned t) {
  if (t == 0) throw DomainError("product_circuit needs t >= 1");
  const auto n = static_cast<std::uint32_t>(c.num_inputs());
  const auto g = static_cast<std::uint32_t>(c.size());
  auto shift = [&](WireRef r, std::uint32_t block) {
    if (r.kind == WireRef::Kind::Input) r.index += block * n;
    if (r.kind == WireRef::Kind::Gate) r.index += block * g;
    return r;
  };
  std::vector<Gate> gates;
  gates.reserve(std::size_t{t} * g);
  std::vector<WireRef> outputs;
  outputs.reserve(std::size_t{t} * c.num_outputs());
  for (std::uint32_t block = 0; block < t; ++block) {
    for (const auto &gate : c.gates()) gates.push_back({gate.op, shift(gate.a, block), shift(gate.b, block)});
    for (const auto &r : c.outputs()) outputs.push_back(shift(r, block));
  }
  return Circuit(c.name() + "_x" + std::to_string(t), n * t, std::move(gates), std::move(outputs));
}

/// D(x1) = (x1, x1) for width 1; in general (x1..xn, x1). Injective with stretch 1.
inline Circuit duplicator(unsigned n = 1) {
  std::vector<WireRef> outputs;
  for (unsigned i = 0; i < n; ++i) outputs.push_back(WireRef::input(i));
  outputs.push_back(WireRef::input(0));
  return Circuit(n == 1 ? "dup" : "dup" + std::to_string(n), n, {}, std::move(outputs));
}

}  // namespace avoidlab
