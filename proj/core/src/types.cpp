#include "optcert/types.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace optcert {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out = "candidate point is infeasible";
  for (const auto& p : parts) {
    out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

InfeasibleError::InfeasibleError(std::vector<std::string> v)
    : Error(join(v)), violations(std::move(v)) {}

TooFewFeasibleError::TooFewFeasibleError(long count)
    : Error("too few feasible samples to estimate growth (got " +
            std::to_string(count) + ", need at least 100)"),
      feasible_count(count) {}

double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double mag = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(
                                                    std::log10(std::fabs(x)))));
  return std::round(x * mag) / mag;
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace optcert
