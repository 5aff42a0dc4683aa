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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "avoidlab/avoidlab.hpp"

namespace avoidlab::cli {

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DomainError("failed writing '" + path + "'");
}

/// Accepts a real in (0,1) or the reciprocal form "1/K".
inline double parse_epsilon(const std::string &text) {
  double v = 0;
  std::size_t used = 0;
  try {
    if (text.rfind("1/", 0) == 0) {
      const double k = std::stod(text.substr(2), &used);
      used += 2;
      v = 1.0 / k;
    } else {
      v = std::stod(text, &used);
    }
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !(v > 0.0 && v < 1.0)) {
    throw DomainError("epsilon must be a real in (0,1) or 1/K with K > 1, got '" + text + "'");
  }
  return v;
}

inline std::vector<OracleFun> load_oracles(const std::string &path) {
  if (path.empty()) return {};
  return parse_oracle_funs(read_file(path));
}

/*! \brief Parses argv and runs one subcommand.
 *
 * Exit status: 0 success, 1 usage or domain error, 2 capacity error.
 * Results go to `out`, diagnostics to `err`.
 */
inline int run_command(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"avoidlab: range avoidance via inversion oracles, with exact MCSP and verification tools",
               "avoidlab"};
  app.set_version_flag("--version", AVOIDLAB_VERSION);
  app.require_subcommand(1);

  std::string circuit_path, bits, inverter = "perfect", basis = "xaon", oracle_path, config_path, csv_path,
                                  out_path, name = "random", mode = "theorem", epsilon_text = "0.1", experiment;
  std::optional<std::uint64_t> seed, t_override;
  unsigned n = 0, m = 0, gates = 0, output = 1, max_vars = 4, max_size = 6;
  std::uint64_t size_bound = 0;
  double epsilon_prime = 0.1;

  auto *gen = app.add_subcommand("gen", "generate a random circuit");
  gen->add_option("--n", n, "inputs")->required();
  gen->add_option("--m", m, "outputs")->required();
  gen->add_option("--gates", gates, "gate count")->required();
  gen->add_option("--seed", seed, "64-bit seed")->required();
  gen->add_option("--name", name, "circuit name");
  gen->add_option("--out", out_path, "write to FILE instead of standard output");

  auto *ev = app.add_subcommand("eval", "evaluate a circuit on one input");
  ev->add_option("--circuit", circuit_path, ".circ file")->required();
  ev->add_option("--input", bits, "input bits x1..xn")->required();

  auto *tt = app.add_subcommand("tt", "truth table of one output (LSB = x1)");
  tt->add_option("--circuit", circuit_path, ".circ file")->required();
  tt->add_option("--output", output, "output index, 1-based");

  auto *mcsp = app.add_subcommand("mcsp", "decide whether a truth table has a circuit of size at most S");
  mcsp->add_option("--tt", bits, "truth table bits")->required();
  mcsp->add_option("--size", size_bound, "size bound S")->required();
  auto *mmin = app.add_subcommand("mcsp-min", "exact minimum circuit size of a truth table");
  mmin->add_option("--tt", bits, "truth table bits")->required();
  for (auto *sub : {mcsp, mmin}) {
    sub->add_option("--basis", basis, "aon or xaon")->check(CLI::IsMember({"aon", "xaon"}));
    sub->add_option("--oracle", oracle_path, "file of 'oraclefun <k> <bits>' lines");
    sub->add_option("--max-vars", max_vars, "enumeration cap on n");
    sub->add_option("--max-size", max_size, "enumeration cap on size");
  }

  auto *inv = app.add_subcommand("invert", "run one inversion attempt");
  inv->add_option("--circuit", circuit_path, ".circ file")->required();
  inv->add_option("--y", bits, "target output bits")->required();
  inv->add_option("--inverter", inverter, "perfect | bounded:R | lex:R | amplified:INNER[:T:A]");
  inv->add_option("--epsilon", epsilon_text, "error target in (0,1), or 1/K");
  inv->add_option("--seed", seed, "64-bit seed (tau)")->required();

  auto *av = app.add_subcommand("avoid", "solve Avoid with an inversion oracle");
  av->add_option("--circuit", circuit_path, ".circ file")->required();
  av->add_option("--epsilon-prime", epsilon_prime, "total error target in (0,1)")->required();
  av->add_option("--inverter", inverter, "perfect | bounded:R | lex:R | amplified:INNER[:T:A]")->required();
  av->add_option("--seed", seed, "64-bit seed")->required();
  av->add_option("--t", t_override, "override the loop count");
  av->add_option("--mode", mode, "theorem | corollary:P");

  auto *ver = app.add_subcommand("verify", "run a verification experiment over the corpus and write CSV");
  ver->add_option("experiment", experiment, "lemma-ratio | lemma-conditional | theorem-error | trivial-sampler | soundness")
      ->required();
  ver->add_option("--config", config_path, "key=value config file");
  ver->add_option("--csv", csv_path, "CSV output path")->required();
  ver->add_option("--seed", seed, "overrides the config seed");

  auto *corp = app.add_subcommand("corpus", "emit the fixed verification corpus");
  corp->add_option("--seed", seed, "corpus seed")->required();
  corp->add_option("--out", out_path, "directory for one .circ file per circuit");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      auto c = random_circuit(n, m, gates, *seed);
      if (!detail::is_identifier(name)) throw DomainError("invalid circuit name '" + name + "'");
      const auto text = serialize_circ(Circuit(name, c.num_inputs(), c.gates(), c.outputs()));
      if (out_path.empty()) {
        out << text;
      } else {
        write_file(out_path, text);
      }
    } else if (ev->parsed()) {
      const auto c = parse_circ(read_file(circuit_path));
      out << eval(c, BitString::parse(bits)).str() << "\n";
    } else if (tt->parsed()) {
      const auto c = parse_circ(read_file(circuit_path));
      out << truth_table(c, output).str() << "\n";
    } else if (mcsp->parsed() || mmin->parsed()) {
      const auto table = TruthTable::parse(bits);
      const McspBudget budget{max_vars, max_size};
      const auto oracles = load_oracles(oracle_path);
      if (mcsp->parsed()) {
        out << (mcsp_decide({table, size_bound, parse_basis(basis), oracles}, budget) ? "true" : "false") << "\n";
      } else {
        out << min_circuit_size(table, parse_basis(basis), oracles, budget) << "\n";
      }
    } else if (inv->parsed()) {
      const auto c = parse_circ(read_file(circuit_path));
      const auto r = invert(InverterSpec::parse(inverter), c, BitString::parse(bits), parse_epsilon(epsilon_text), *seed);
      if (r.success) {
        out << "SUCCESS " << r.candidate->str() << " probes=" << r.probes_used << "\n";
      } else {
        out << "FAIL probes=" << r.probes_used << "\n";
      }
    } else if (av->parsed()) {
      const auto c = parse_circ(read_file(circuit_path));
      auto params = choose_params(epsilon_prime, c.num_inputs(), AvoidMode::parse(mode), *seed);
      if (t_override) params.t = *t_override;
      const auto result = solve_avoid(c, params, InverterSpec::parse(inverter));
      out << result.headline() << "\n" << result.transcript_text();
    } else if (ver->parsed()) {
      LabConfig cfg = config_path.empty() ? LabConfig{} : parse_config(read_file(config_path));
      if (seed) cfg.seed = seed;
      const auto rows = run_experiment(experiment, cfg);
      std::ostringstream csv;
      write_csv(csv, rows);
      write_file(csv_path, csv.str());
      std::size_t violated = 0, inconclusive = 0;
      for (const auto &r : rows) {
        if (r.holds == "false") ++violated;
        if (r.holds == "inconclusive") ++inconclusive;
      }
      out << experiment << ": rows=" << rows.size() << " violations=" << violated << " inconclusive=" << inconclusive
          << "\n";
      if (violated) {
        err << "avoidlab: " << violated << " row(s) violate the checked inequality\n";
        return 1;
      }
    } else if (corp->parsed()) {
      const auto corpus = generate_corpus(*seed);
      if (!out_path.empty()) std::filesystem::create_directories(out_path);
      for (const auto &e : corpus) {
        if (out_path.empty()) {
          out << serialize_circ(e.circuit);
        } else {
          write_file((std::filesystem::path(out_path) / (e.id + ".circ")).string(), serialize_circ(e.circuit));
          out << e.id << "\n";
        }
      }
    }
  } catch (const CapacityError &e) {
    err << "avoidlab: capacity: " << e.what() << "\n";
    return 2;
  } catch (const DomainError &e) {
    err << "avoidlab: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "avoidlab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace avoidlab::cli
