#include "optcert/problem_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace optcert {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
  throw ParseError(ctx + ": " + msg);
}

void check_object(const json& j, const std::vector<std::string>& allowed,
                  const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(ctx, "unknown key \"" + it.key() + "\"");
  }
}

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key))
    fail(ctx, "missing required key \"" + std::string(key) + "\"");
  return j.at(key);
}

double as_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx, "expected a number");
  return j.get<double>();
}

Vec as_vec(const json& j, int n, const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected an array of numbers");
  if (static_cast<int>(j.size()) != n)
    fail(ctx, "expected " + std::to_string(n) + " entries, got " +
             std::to_string(j.size()));
  Vec v(n);
  for (int i = 0; i < n; ++i)
    v[i] = as_number(j[i], ctx + "[" + std::to_string(i) + "]");
  return v;
}

Polynomial parse_poly(const json& j, int n, const std::string& ctx) {
  check_object(j, {"terms"}, ctx);
  const json& jterms = require(j, "terms", ctx);
  if (!jterms.is_array()) fail(ctx + ".terms", "expected an array");
  std::vector<Term> terms;
  terms.reserve(jterms.size());
  for (std::size_t k = 0; k < jterms.size(); ++k) {
    const std::string tctx = ctx + ".terms[" + std::to_string(k) + "]";
    const json& jt = jterms[k];
    check_object(jt, {"c", "e"}, tctx);
    Term t;
    t.coeff = as_number(require(jt, "c", tctx), tctx + ".c");
    const json& je = require(jt, "e", tctx);
    if (!je.is_array() || static_cast<int>(je.size()) != n)
      fail(tctx + ".e", "expected an array of " + std::to_string(n) +
               " exponents");
    t.exps.resize(n);
    for (int i = 0; i < n; ++i) {
      const json& ji = je[i];
      if (!ji.is_number_integer() || ji.get<long>() < 0)
        fail(tctx + ".e[" + std::to_string(i) + "]",
             "expected a non-negative integer");
      t.exps[i] = ji.get<int>();
    }
    terms.push_back(std::move(t));
  }
  try {
    return Polynomial(n, std::move(terms));
  } catch (const Error& e) {
    fail(ctx, e.what());
  }
}

PiecewiseFn parse_function(const json& j, int n, const std::string& ctx) {
  check_object(j, {"poly", "piecewise"}, ctx);
  const bool has_poly = j.contains("poly");
  const bool has_pw = j.contains("piecewise");
  if (has_poly == has_pw)
    fail(ctx, "expected exactly one of \"poly\" or \"piecewise\"");
  try {
    if (has_poly) return PiecewiseFn(parse_poly(j.at("poly"), n, ctx + ".poly"));

    const json& jpw = j.at("piecewise");
    check_object(jpw, {"cells"}, ctx + ".piecewise");
    const json& jcells = require(jpw, "cells", ctx + ".piecewise");
    if (!jcells.is_array() || jcells.empty())
      fail(ctx + ".piecewise.cells", "expected a non-empty array");
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k < jcells.size(); ++k) {
      const std::string cctx =
          ctx + ".piecewise.cells[" + std::to_string(k) + "]";
      const json& jc = jcells[k];
      check_object(jc, {"guards", "poly"}, cctx);
      const json& jg = require(jc, "guards", cctx);
      if (!jg.is_array()) fail(cctx + ".guards", "expected an array");
      Cell cell;
      for (std::size_t gi = 0; gi < jg.size(); ++gi) {
        const std::string gctx =
            cctx + ".guards[" + std::to_string(gi) + "]";
        const json& jguard = jg[gi];
        check_object(jguard, {"a", "b"}, gctx);
        Halfspace hs;
        hs.a = as_vec(require(jguard, "a", gctx), n, gctx + ".a");
        hs.b = as_number(require(jguard, "b", gctx), gctx + ".b");
        cell.guards.push_back(std::move(hs));
      }
      pieces.push_back(
          Piece{std::move(cell), parse_poly(require(jc, "poly", cctx), n,
                                            cctx + ".poly")});
    }
    return PiecewiseFn(n, std::move(pieces));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(ctx, e.what());
  }
}

std::vector<PiecewiseFn> parse_function_list(const json& root, const char* key,
                                             int n, bool required) {
  std::vector<PiecewiseFn> out;
  if (!root.contains(key)) {
    if (required) fail("problem", "missing required key \"" +
                                      std::string(key) + "\"");
    return out;
  }
  const json& arr = root.at(key);
  if (!arr.is_array()) fail(key, "expected an array");
  if (required && arr.empty()) fail(key, "expected at least one function");
  for (std::size_t k = 0; k < arr.size(); ++k)
    out.push_back(parse_function(
        arr[k], n, std::string(key) + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace

Problem parse_problem(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  check_object(root,
               {"n", "objectives", "inequalities", "equalities", "box",
                "mscq", "multipliers"},
               "problem");

  const json& jn = require(root, "n", "problem");
  if (!jn.is_number_integer() || jn.get<long>() <= 0)
    fail("problem.n", "expected a positive integer");
  const int n = jn.get<int>();

  Problem prob;
  prob.n = n;
  prob.objectives = parse_function_list(root, "objectives", n, true);
  prob.inequalities = parse_function_list(root, "inequalities", n, false);
  prob.equalities = parse_function_list(root, "equalities", n, false);

  prob.box = Box::centered(n, 10.0);
  if (root.contains("box")) {
    const json& jbox = root.at("box");
    if (!jbox.is_array() || static_cast<int>(jbox.size()) != n)
      fail("box", "expected an array of " + std::to_string(n) +
               " [lo, hi] pairs");
    for (int i = 0; i < n; ++i) {
      const std::string bctx = "box[" + std::to_string(i) + "]";
      const json& ji = jbox[i];
      if (!ji.is_array() || ji.size() != 2)
        fail(bctx, "expected a [lo, hi] pair");
      prob.box.lo[i] = as_number(ji[0], bctx + "[0]");
      prob.box.hi[i] = as_number(ji[1], bctx + "[1]");
      if (!(prob.box.lo[i] < prob.box.hi[i]))
        fail(bctx, "lower bound must be strictly below upper bound");
    }
  }

  if (root.contains("mscq")) {
    const json& jm = root.at("mscq");
    if (!jm.is_boolean()) fail("mscq", "expected a boolean");
    prob.mscq_asserted = jm.get<bool>();
  }

  if (root.contains("multipliers")) {
    const json& jm = root.at("multipliers");
    check_object(jm, {"alpha", "lambda", "mu"}, "multipliers");
    UserMultipliers um;
    const int q = static_cast<int>(prob.objectives.size());
    const int m = static_cast<int>(prob.inequalities.size());
    const int p = static_cast<int>(prob.equalities.size());
    if (jm.contains("alpha"))
      um.alpha = as_vec(jm.at("alpha"), q, "multipliers.alpha");
    else if (q == 1)
      um.alpha = Vec::Ones(1);
    else
      fail("multipliers", "\"alpha\" is required for multiobjective problems");
    if (jm.contains("lambda"))
      um.lambda = as_vec(jm.at("lambda"), m, "multipliers.lambda");
    else if (m == 0)
      um.lambda = Vec::Zero(0);
    else
      fail("multipliers", "\"lambda\" is required when inequalities exist");
    if (jm.contains("mu"))
      um.mu = as_vec(jm.at("mu"), p, "multipliers.mu");
    else if (p == 0)
      um.mu = Vec::Zero(0);
    else
      fail("multipliers", "\"mu\" is required when equalities exist");
    prob.multipliers = std::move(um);
  }

  return prob;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace optcert
