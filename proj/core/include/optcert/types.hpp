#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace optcert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Decision tolerances, shared across modules. Defaults are the library
// contract; all of them can be overridden per run.
struct Tolerances {
  double c0 = 1e-9;     // value agreement across shared facets
  double c1 = 1e-9;     // gradient agreement across shared facets
  double cell = 1e-10;  // guard slack when testing cell membership
  double act = 1e-8;    // |g_i(x)| below this counts as active
  double feas = 1e-8;   // feasibility of candidate points
  double mult = 1e-8;   // strict-multiplier threshold for the tightened cone
  double q = 1e-8;      // curvature decision band on unit directions
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point lies outside every cell of a piecewise function.
struct NoCellError : Error {
  using Error::Error;
};

// Candidate point violates the constraints; messages describe each violation.
struct InfeasibleError : Error {
  explicit InfeasibleError(std::vector<std::string> v);
  std::vector<std::string> violations;
};

struct DimensionError : Error {
  using Error::Error;
};

struct TrivialConeError : Error {
  using Error::Error;
};

// Lagrangian cell refinement exceeded the hard cap.
struct RefinementError : Error {
  using Error::Error;
};

struct NoMultipliersError : Error {
  using Error::Error;
};

// Sampling oracle abstains: not enough feasible samples to estimate.
struct TooFewFeasibleError : Error {
  explicit TooFewFeasibleError(long count);
  long feasible_count = 0;
};

// Problem-file syntax or schema violation.
struct ParseError : Error {
  using Error::Error;
};

// Round to `digits` significant decimal digits (used when embedding
// matrices and rays in reports).
double round_sig(double x, int digits);

// Fixed-format decimal rendering with shortest round-trip; keeps report
// output byte-stable across runs.
std::string format_number(double x);

}  // namespace optcert
