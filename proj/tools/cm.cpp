// cm: command-line front end for the Cantor-set algebra library.
//
//   cm verify [--suite NAME]... [--trials N] [--seed S] [--depth N] [--format json|text]
//   cm retract "{p1; p2; p3}"
//   cm eval --op ret|h|xor x y z
//   cm cover --e PT --cyl WORD [--budget N]
//   cm oracle --depth N --max-size K
//
// Exit status: 0 pass, 1 property failure, 2 usage or parse error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cantor/cantor.hpp"
#include "cantor/harness/oracle.hpp"
#include "cantor/harness/suites.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = std::stoull(text, &used, 0);
  if (used != text.size()) throw std::invalid_argument("bad seed '" + text + "'");
  return v;
}

int run_verify(cantor::harness::Config cfg, bool seed_given, const std::string& format, bool timing,
               const std::string& output) {
  if (!seed_given)
    if (const char* env = std::getenv("CM_SEED")) cfg.seed = parse_seed(env);
  cfg.format = format == "json" ? cantor::harness::OutputFormat::Json : cantor::harness::OutputFormat::Text;
  cantor::harness::Report report = cantor::harness::run_suite(cfg);
  std::string text = cfg.format == cantor::harness::OutputFormat::Json ? report.to_json(timing).dump(2) + "\n"
                                                                       : report.to_text(timing);
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << text;
  }
  return report.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cantor;

  CLI::App app{"Exact Mal'tsev operations and the Boolean-group retraction on the Cantor set"};
  app.require_subcommand(1);

  // verify
  harness::Config cfg;
  std::string format = "text", output;
  bool no_timing = false;
  std::uint64_t seed = harness::kDefaultSeed;
  auto* verify = app.add_subcommand("verify", "Run property suites and print a report");
  verify->add_option("--suite", cfg.suites, "Suite to run (repeatable; default: all default suites)");
  verify->add_option("--trials", cfg.trials, "Trials per property")->capture_default_str();
  auto* seed_opt = verify->add_option("--seed", seed, "RNG seed (CM_SEED is used when absent)");
  verify->add_option("--depth", cfg.oracle_depth, "Exhaustive oracle depth")->capture_default_str();
  verify->add_option("--max-size", cfg.oracle_max_size, "Exhaustive oracle max set size")->capture_default_str();
  verify->add_option("--max-pre", cfg.max_pre, "Max preperiod of generated points")->capture_default_str();
  verify->add_option("--max-per", cfg.max_per, "Max period of generated points")->capture_default_str();
  verify->add_option("--scheme", cfg.scheme, "Transport scheme: canonical|masked")->capture_default_str();
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--no-timing", no_timing, "Omit wall times from the report");
  verify->add_option("--output", output, "Write the report to a file");
  bool list = false;
  verify->add_flag("--list", list, "List suite names and exit");

  // retract
  std::string element_text;
  bool verbose = false;
  auto* retract_cmd = app.add_subcommand("retract", "Evaluate r(g) for an odd finite set g");
  retract_cmd->add_option("g", element_text, "Group element, e.g. \"{(0); 1(0); 11(0)}\"")->required();
  retract_cmd->add_flag("-v,--verbose", verbose, "Also print Upsilon(g) and R(g)");

  // eval
  std::string op = "h", scheme_name = "canonical";
  std::vector<std::string> xyz;
  auto* eval = app.add_subcommand("eval", "Evaluate a ternary operation at (x, y, z)");
  eval->add_option("--op", op, "ret | h | xor")->check(CLI::IsMember({"ret", "h", "xor"}))->required();
  eval->add_option("--scheme", scheme_name, "Transport scheme for --op h")->capture_default_str();
  eval->add_option("points", xyz, "x y z")->expected(3)->required();

  // cover
  std::string e_text, cyl_text;
  std::size_t budget = 64;
  auto* cover = app.add_subcommand("cover", "Search a finite M with C = union of phi_h(e, y, B(w)), y in M");
  cover->add_option("--e", e_text, "Base point")->required();
  cover->add_option("--cyl", cyl_text, "Cylinder word (\"\" or ε for C)")->required();
  cover->add_option("--budget", budget, "Maximum number of candidates")->capture_default_str();

  // oracle
  std::size_t depth = 4, max_size = 5;
  std::string oracle_format = "text";
  auto* oracle = app.add_subcommand("oracle", "Exhaustive finite-model check of the retraction");
  oracle->add_option("--depth", depth, "Grid depth")->capture_default_str();
  oracle->add_option("--max-size", max_size, "Largest odd subset size")->capture_default_str();
  oracle->add_option("--format", oracle_format, "Report format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) {
      if (list) {
        for (const auto& info : harness::suite_registry())
          std::cout << info.name << (info.in_default ? "" : "  (not in default set)") << "\n";
        return kPass;
      }
      cfg.seed = seed;
      return run_verify(cfg, seed_opt->count() > 0, format, !no_timing, output);
    }

    if (*retract_cmd) {
      GroupElement g = parse_group_element(element_text);
      Point r = retract(g);
      if (verbose) {
        std::cout << "upsilon   " << format_family(upsilon(g)) << "\n";
        std::cout << "survivors " << format_group_element(survivors(g)) << "\n";
      }
      std::cout << format_point(r) << "\n";
      return kPass;
    }

    if (*eval) {
      Point x = parse_point(xyz[0]), y = parse_point(xyz[1]), z = parse_point(xyz[2]);
      Point out = op == "ret" ? phi_ret(x, y, z) : op == "xor" ? phi_xor(x, y, z) : phi_h(x, y, z, *make_scheme(scheme_name));
      std::cout << format_point(out) << "\n";
      return kPass;
    }

    if (*cover) {
      Point e = parse_point(e_text);
      Cylinder U = parse_cylinder(cyl_text);
      CoverResult r = cover_search(e, U, canonical_scheme(), budget);
      std::cout << "M = " << format_group_element(GroupElement(r.M)) << "\n";
      std::cout << "images = " << format_family(r.images) << "\n";
      std::cout << "candidates examined = " << r.candidates_examined << "\n";
      if (!r.ok) {
        std::cout << "NOT COVERED: " << format_cylinder(*r.uncovered) << " meets no image\n";
        return kFail;
      }
      std::cout << "covered\n";
      return kPass;
    }

    if (*oracle) {
      harness::OracleReport rep = harness::exhaustive_oracle(depth, max_size);
      harness::SuiteResult r = harness::oracle_suite_result(rep);
      if (oracle_format == "json") {
        harness::Config c;
        c.oracle_depth = depth;
        c.oracle_max_size = max_size;
        std::cout << harness::Report{c, {r}}.to_json(false).dump(2) << "\n";
      } else {
        std::cout << (r.status == harness::Status::Pass ? "PASS " : "FAIL ") << r.detail << "\n";
        for (const auto& [k, v] : r.counterexample) std::cout << "  " << k << " = " << v << "\n";
      }
      return rep.passed() ? kPass : kFail;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
