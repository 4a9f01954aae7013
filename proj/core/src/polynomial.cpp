#include "optcert/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace optcert {

namespace {

// x^e for small non-negative integer e.
double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

Polynomial::Polynomial(int n, std::vector<Term> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n_ <= 0) throw Error("polynomial dimension must be positive");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exps.size()) != n_)
      throw Error("term exponent vector has length " +
                  std::to_string(t.exps.size()) + ", expected " +
                  std::to_string(n_));
    int total = 0;
    for (int e : t.exps) {
      if (e < 0) throw Error("negative exponent in polynomial term");
      total += e;
    }
    if (total > kMaxDegree)
      throw Error("polynomial term has total degree " + std::to_string(total) +
                  ", maximum supported is " + std::to_string(kMaxDegree));
  }
  canonicalize();
}

Polynomial Polynomial::constant(int n, double c) {
  return Polynomial(n, {Term{c, std::vector<int>(n, 0)}});
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exps < b.exps; });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exps == t.exps)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coeff == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_)
    d = std::max(d, std::accumulate(t.exps.begin(), t.exps.end(), 0));
  return d;
}

double Polynomial::eval(const Vec& x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int i = 0; i < n_; ++i) m *= ipow(x[i], t.exps[i]);
    s += m;
  }
  return s;
}

Vec Polynomial::gradient(const Vec& x) const {
  Vec g = Vec::Zero(n_);
  for (const auto& t : terms_) {
    for (int i = 0; i < n_; ++i) {
      if (t.exps[i] == 0) continue;
      double m = t.coeff * t.exps[i] * ipow(x[i], t.exps[i] - 1);
      for (int j = 0; j < n_; ++j)
        if (j != i) m *= ipow(x[j], t.exps[j]);
      g[i] += m;
    }
  }
  return g;
}

Mat Polynomial::hessian(const Vec& x) const {
  Mat h = Mat::Zero(n_, n_);
  for (const auto& t : terms_) {
    for (int i = 0; i < n_; ++i) {
      if (t.exps[i] == 0) continue;
      // d2/dx_i^2
      if (t.exps[i] >= 2) {
        double m = t.coeff * t.exps[i] * (t.exps[i] - 1) *
                   ipow(x[i], t.exps[i] - 2);
        for (int j = 0; j < n_; ++j)
          if (j != i) m *= ipow(x[j], t.exps[j]);
        h(i, i) += m;
      }
      // d2/dx_i dx_j, j > i
      for (int j = i + 1; j < n_; ++j) {
        if (t.exps[j] == 0) continue;
        double m = t.coeff * t.exps[i] * t.exps[j] *
                   ipow(x[i], t.exps[i] - 1) * ipow(x[j], t.exps[j] - 1);
        for (int k = 0; k < n_; ++k)
          if (k != i && k != j) m *= ipow(x[k], t.exps[k]);
        h(i, j) += m;
        h(j, i) += m;
      }
    }
  }
  return h;
}

Polynomial Polynomial::partial(int i) const {
  if (i < 0 || i >= n_) throw DimensionError("partial index out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exps[i] == 0) continue;
    Term d = t;
    d.coeff *= t.exps[i];
    d.exps[i] -= 1;
    out.push_back(std::move(d));
  }
  return Polynomial(n_, std::move(out));
}

void Polynomial::add_scaled(const Polynomial& other, double s) {
  if (other.n_ != n_)
    throw DimensionError("polynomial dimensions differ in add_scaled");
  if (s == 0.0) return;
  for (const auto& t : other.terms_)
    terms_.push_back(Term{s * t.coeff, t.exps});
  canonicalize();
}

}  // namespace optcert
