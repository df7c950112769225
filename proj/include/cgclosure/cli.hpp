#pragma once

#include <iosfwd>
#include <string>

#include "cgclosure/io.hpp"

namespace cgc::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage or schema error.
int run(int argc, char** argv);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Parses a --pi argument. A flat pair such as [0,1] is one coordinate
/// rat + irr*sqrt(field); otherwise every element is one coordinate.
QVec parse_pi(const std::string& text, int field);

struct CorpusOutcome {
  std::string name;
  bool passed = false;
  bool had_expected = false;
  std::string detail;
};

/// Runs one instance file; expected data comes from expected_path if it
/// exists, else from the instance's own "expected" block.
CorpusOutcome run_instance(const std::string& instance_path, const std::string& expected_path, Json* result);

}  // namespace cgc::cli
