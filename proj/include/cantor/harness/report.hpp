#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cantor/harness/config.hpp"
#include "cantor/maltsev.hpp"

namespace cantor::harness {

enum class Status { Pass, Fail, Skip };

inline const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
  }
  return "?";
}

/// Named inputs in text grammar, enough to replay a failure.
using Replay = std::vector<std::pair<std::string, std::string>>;

struct SuiteResult {
  std::string name;
  Status status = Status::Pass;
  std::size_t trials = 0;
  Replay counterexample;  // nonempty whenever status is Fail
  std::string detail;
  double wall_ms = 0.0;
};

inline Replay to_replay(const Counterexample& c) {
  Replay r;
  for (const auto& [k, p] : c.inputs) r.emplace_back(k, format_point(p));
  r.emplace_back("lhs", format_point(c.lhs));
  r.emplace_back("rhs", format_point(c.rhs));
  return r;
}

struct Report {
  static constexpr int kSchemaVersion = 1;

  Config config;
  std::vector<SuiteResult> suites;

  bool passed() const {
    for (const auto& s : suites)
      if (s.status == Status::Fail) return false;
    return true;
  }

  nlohmann::ordered_json to_json(bool with_timing = true) const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = config.seed;
    j["trials"] = config.trials;
    j["max_preperiod"] = config.max_pre;
    j["max_period"] = config.max_per;
    j["oracle_depth"] = config.oracle_depth;
    j["oracle_max_size"] = config.oracle_max_size;
    j["scheme"] = config.scheme;
    j["status"] = passed() ? "pass" : "fail";
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : suites) {
      nlohmann::ordered_json e;
      e["name"] = s.name;
      e["status"] = status_name(s.status);
      e["trials"] = s.trials;
      if (s.counterexample.empty()) {
        e["counterexample"] = nullptr;
      } else {
        nlohmann::ordered_json c;
        for (const auto& [k, v] : s.counterexample) c[k] = v;
        e["counterexample"] = c;
      }
      e["detail"] = s.detail;
      if (with_timing) e["wall_ms"] = s.wall_ms;
      arr.push_back(std::move(e));
    }
    j["suites"] = std::move(arr);
    return j;
  }

  std::string to_text(bool with_timing = true) const {
    std::ostringstream os;
    for (const auto& s : suites) {
      os << (s.status == Status::Pass ? "PASS " : s.status == Status::Fail ? "FAIL " : "SKIP ") << s.name
         << "  trials=" << s.trials;
      if (with_timing) os << "  " << static_cast<long long>(s.wall_ms) << "ms";
      os << "\n";
      if (!s.detail.empty()) os << "     " << s.detail << "\n";
      for (const auto& [k, v] : s.counterexample) os << "     " << k << " = " << v << "\n";
    }
    os << (passed() ? "all suites passed" : "some suites FAILED") << " (seed " << config.seed << ")\n";
    return os.str();
  }
};

}  // namespace cantor::harness
