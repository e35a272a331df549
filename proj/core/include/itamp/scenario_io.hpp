#pragma once

#include <stdexcept>
#include <string>

#include "itamp/scene.hpp"

namespace itamp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string key, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": key '" + key + "': " +
                           message),
        line_(line),
        key_(std::move(key)) {}

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Parses the sectioned scenario text format ([horizon], [objective],
/// [penalties], [extensions], [solver], [robots], [objects], [obstacles]).
/// Unknown keys are a parse error naming the line and key. The returned
/// scenario is fully validated.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_string(const std::string& text);

/// Canonical text form; parse_scenario_string(write_scenario(s)) reproduces
/// the scenario exactly.
std::string write_scenario(const Scenario& scenario);

}  // namespace itamp
