#pragma once

#include "optcert/types.hpp"

#include <iosfwd>
#include <string>

namespace optcert {

struct RunConfig {
  std::string command;  // validate | certify | oracle | taylor
  std::string input_path;
  std::string point_arg;  // comma-separated coordinates
  std::string multipliers_path;
  std::string fn = "f0";  // taylor target: f<i>, g<i>, or h<i>
  std::string a_arg;      // taylor segment endpoints
  std::string b_arg;
  int samples = 4096;           // certificate sampling directions
  long oracle_samples = 100000;
  double radius = 1e-2;
  unsigned seed = 42;
  double tol_q = 1e-8;
  bool strict = false;
  std::string format = "json";  // json | text
};

// Exit codes: 0 success, 1 validation/certification failure, 2 parse error,
// 3 inconclusive certificates under --strict.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_taylor(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// "1,0.5,-2" -> vector; throws ParseError on malformed input.
Vec parse_point_arg(const std::string& arg);

}  // namespace optcert
