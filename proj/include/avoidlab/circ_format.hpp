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

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "avoidlab/circuit.hpp"
#include "avoidlab/errors.hpp"

namespace avoidlab {

// The .circ format:
//
//   circuit <name>
//   inputs <n>
//   outputs <m>
//   gate g<k> = NOT <ref>          (or AND/OR/XOR <ref> <ref>)
//   out <j> = <ref>                (j = 1..m, in order)
//   end
//
// <ref> is x<i>, c0, c1, or an already defined g<k>. Gate ids strictly
// increase but need not be contiguous; serialize renumbers them g1..gN.

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool parse_uint(std::string_view s, std::uint64_t &out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head_ok = [](char ch) { return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || ch == '_'; };
  if (!head_ok(s[0])) return false;
  for (char ch : s) {
    if (!head_ok(ch) && !(ch >= '0' && ch <= '9') && ch != '.' && ch != '-') return false;
  }
  return true;
}

class CircParser {
 public:
  explicit CircParser(std::string_view text) : text_(text) {}

  Circuit run() {
    std::string name;
    std::uint64_t n = 0, m = 0;
    std::vector<Gate> gates;
    std::map<std::uint64_t, std::uint32_t> gate_pos;  // file id -> position
    std::uint64_t last_gate_id = 0;
    std::vector<WireRef> outputs;
    enum class Stage { Name, Inputs, Outputs, Body, Done } stage = Stage::Name;

    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view line = text_.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      const auto tok = split_tokens(line);
      if (tok.empty()) continue;

      switch (stage) {
        case Stage::Name:
          expect(tok.size() == 2 && tok[0] == "circuit", "expected 'circuit <name>'");
          expect(is_identifier(tok[1]), "invalid circuit name '" + std::string(tok[1]) + "'");
          name = std::string(tok[1]);
          stage = Stage::Inputs;
          break;
        case Stage::Inputs:
          expect(tok.size() == 2 && tok[0] == "inputs" && parse_uint(tok[1], n) && n >= 1 && n <= (1u << 20),
                 "expected 'inputs <n>' with n >= 1");
          stage = Stage::Outputs;
          break;
        case Stage::Outputs:
          expect(tok.size() == 2 && tok[0] == "outputs" && parse_uint(tok[1], m) && m >= 1 && m <= (1u << 20),
                 "expected 'outputs <m>' with m >= 1");
          stage = Stage::Body;
          break;
        case Stage::Body:
          if (tok[0] == "gate") {
            expect(outputs.empty(), "gate definitions must precede 'out' lines");
            expect(tok.size() >= 4 && tok[2] == "=", "expected 'gate g<k> = OP <ref>...'");
            std::uint64_t id = 0;
            expect(tok[1].size() > 1 && tok[1][0] == 'g' && parse_uint(tok[1].substr(1), id) && id >= 1,
                   "bad gate id '" + std::string(tok[1]) + "'");
            expect(!gate_pos.count(id), "duplicate gate id g" + std::to_string(id));
            expect(id > last_gate_id, "gate ids must be strictly increasing (g" + std::to_string(id) +
                                          " after g" + std::to_string(last_gate_id) + ")");
            Gate g;
            g.op = parse_op(tok[3]);
            const std::size_t want = op_arity(g.op);
            expect(tok.size() == 4 + want, std::string(op_name(g.op)) + " takes exactly " + std::to_string(want) +
                                               " operand" + (want == 1 ? "" : "s"));
            g.a = parse_ref(tok[4], n, gate_pos);
            if (want == 2) g.b = parse_ref(tok[5], n, gate_pos);
            gate_pos[id] = static_cast<std::uint32_t>(gates.size());
            last_gate_id = id;
            gates.push_back(g);
          } else if (tok[0] == "out") {
            std::uint64_t j = 0;
            expect(tok.size() == 4 && tok[2] == "=" && parse_uint(tok[1], j), "expected 'out <j> = <ref>'");
            expect(j == outputs.size() + 1, "output lines must be numbered 1..m in order (got " +
                                                std::to_string(j) + ", expected " +
                                                std::to_string(outputs.size() + 1) + ")");
            expect(j <= m, "more output lines than the declared " + std::to_string(m));
            outputs.push_back(parse_ref(tok[3], n, gate_pos));
          } else if (tok[0] == "end") {
            expect(tok.size() == 1, "unexpected tokens after 'end'");
            expect(outputs.size() == m, "declared " + std::to_string(m) + " outputs but defined " +
                                            std::to_string(outputs.size()));
            stage = Stage::Done;
          } else {
            fail("unknown statement '" + std::string(tok[0]) + "'");
          }
          break;
        case Stage::Done:
          fail("content after 'end'");
      }
    }
    if (stage != Stage::Done) {
      line_no_ = 0;
      fail("unexpected end of input (missing 'end')");
    }
    return Circuit(std::move(name), static_cast<unsigned>(n), std::move(gates), std::move(outputs));
  }

 private:
  [[noreturn]] void fail(const std::string &msg) const {
    if (line_no_ == 0) throw DomainError("circ: " + msg);
    throw DomainError("circ line " + std::to_string(line_no_) + ": " + msg);
  }
  void expect(bool ok, const std::string &msg) const {
    if (!ok) fail(msg);
  }

  GateOp parse_op(std::string_view s) const {
    if (s == "NOT") return GateOp::Not;
    if (s == "AND") return GateOp::And;
    if (s == "OR") return GateOp::Or;
    if (s == "XOR") return GateOp::Xor;
    fail("unknown gate op '" + std::string(s) + "'");
  }

  WireRef parse_ref(std::string_view s, std::uint64_t n, const std::map<std::uint64_t, std::uint32_t> &gate_pos) const {
    if (s == "c0") return WireRef::constant(false);
    if (s == "c1") return WireRef::constant(true);
    std::uint64_t v = 0;
    if (s.size() > 1 && s[0] == 'x' && parse_uint(s.substr(1), v)) {
      expect(v >= 1 && v <= n, "input " + std::string(s) + " out of range x1..x" + std::to_string(n));
      return WireRef::input(static_cast<std::uint32_t>(v - 1));
    }
    if (s.size() > 1 && s[0] == 'g' && parse_uint(s.substr(1), v)) {
      auto it = gate_pos.find(v);
      expect(it != gate_pos.end(), "reference to " + std::string(s) + " before its definition (topological order)");
      return WireRef::gate(it->second);
    }
    fail("bad wire reference '" + std::string(s) + "'");
  }

  std::string_view text_;
  std::size_t line_no_ = 0;
};

}  // namespace detail

inline Circuit parse_circ(std::string_view text) { return detail::CircParser(text).run(); }

inline std::string serialize_circ(const Circuit &c) {
  std::ostringstream out;
  out << "circuit " << c.name() << "\n";
  out << "inputs " << c.num_inputs() << "\n";
  out << "outputs " << c.num_outputs() << "\n";
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto &g = c.gates()[k];
    out << "gate g" << (k + 1) << " = " << op_name(g.op) << " " << g.a.str();
    if (op_arity(g.op) == 2) out << " " << g.b.str();
    out << "\n";
  }
  for (std::size_t j = 0; j < c.num_outputs(); ++j) out << "out " << (j + 1) << " = " << c.outputs()[j].str() << "\n";
  out << "end\n";
  return out.str();
}

}  // namespace avoidlab
