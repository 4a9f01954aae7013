#pragma once

#include "optcert/types.hpp"

#include <vector>

namespace optcert {

// One monomial: coeff * prod_i x_i^exps[i].
struct Term {
  double coeff = 0.0;
  std::vector<int> exps;
};

// Sparse multivariate polynomial, total degree at most kMaxDegree.
// Terms are kept canonical: exponent vectors sorted lexicographically,
// duplicates merged, exact zero coefficients dropped.
class Polynomial {
 public:
  static constexpr int kMaxDegree = 6;

  Polynomial() = default;
  Polynomial(int n, std::vector<Term> terms);

  static Polynomial zero(int n) { return Polynomial(n, {}); }
  static Polynomial constant(int n, double c);

  int dim() const { return n_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  double eval(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

  // Exact partial derivative d/dx_i.
  Polynomial partial(int i) const;

  // *this += s * other (dimensions must match).
  void add_scaled(const Polynomial& other, double s);

 private:
  void canonicalize();

  int n_ = 0;
  std::vector<Term> terms_;
};

}  // namespace optcert
