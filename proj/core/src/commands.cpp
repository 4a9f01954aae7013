#include "optcert/commands.hpp"

#include "optcert/bundle.hpp"
#include "optcert/certify.hpp"
#include "optcert/oracle.hpp"
#include "optcert/problem_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace optcert {

namespace {

using ojson = nlohmann::ordered_json;

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, const std::string& ctx) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw ParseError("");
    return v;
  } catch (...) {
    throw ParseError(ctx + ": invalid number '" + tok + "'");
  }
}

Vec json_vec(const nlohmann::json& j, int len, const std::string& ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw ParseError(ctx + ": expected an array of " + std::to_string(len) +
                     " numbers");
  Vec out(len);
  for (int i = 0; i < len; ++i) {
    if (!j[i].is_number())
      throw ParseError(ctx + "[" + std::to_string(i) + "]: expected a number");
    out[i] = j[i].get<double>();
  }
  return out;
}

UserMultipliers load_multipliers(const std::string& path,
                                 const Problem& prob) {
  std::ifstream in(path);
  if (!in) throw ParseError("multipliers: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("multipliers: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("multipliers: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "alpha" && it.key() != "lambda" && it.key() != "mu")
      throw ParseError("multipliers: unknown key '" + it.key() + "'");

  const int q = static_cast<int>(prob.objectives.size());
  const int m = static_cast<int>(prob.inequalities.size());
  const int p = static_cast<int>(prob.equalities.size());
  UserMultipliers um;
  if (j.contains("alpha"))
    um.alpha = json_vec(j.at("alpha"), q, "multipliers.alpha");
  else if (q == 1)
    um.alpha = Vec::Ones(1);
  else
    throw ParseError("multipliers: alpha required for multiobjective problems");
  if (m > 0) {
    if (!j.contains("lambda"))
      throw ParseError("multipliers: lambda required (m > 0)");
    um.lambda = json_vec(j.at("lambda"), m, "multipliers.lambda");
  } else if (j.contains("lambda")) {
    um.lambda = json_vec(j.at("lambda"), 0, "multipliers.lambda");
  }
  if (p > 0) {
    if (!j.contains("mu"))
      throw ParseError("multipliers: mu required (p > 0)");
    um.mu = json_vec(j.at("mu"), p, "multipliers.mu");
  } else if (j.contains("mu")) {
    um.mu = json_vec(j.at("mu"), 0, "multipliers.mu");
  }
  return um;
}

const PiecewiseFn& select_fn(const Problem& prob, const std::string& sel) {
  if (sel.size() < 2)
    throw ParseError("fn: expected f<i>, g<i>, or h<i>, got '" + sel + "'");
  const std::vector<PiecewiseFn>* list = nullptr;
  std::string kind;
  switch (sel[0]) {
    case 'f':
      list = &prob.objectives;
      kind = "objectives";
      break;
    case 'g':
      list = &prob.inequalities;
      kind = "inequalities";
      break;
    case 'h':
      list = &prob.equalities;
      kind = "equalities";
      break;
    default:
      throw ParseError("fn: expected f<i>, g<i>, or h<i>, got '" + sel + "'");
  }
  std::string idx_str = sel.substr(1);
  for (char c : idx_str)
    if (c < '0' || c > '9')
      throw ParseError("fn: invalid index in '" + sel + "'");
  int idx = static_cast<int>(parse_double(idx_str, "fn"));
  if (idx < 0 || idx >= static_cast<int>(list->size()))
    throw ParseError("fn: " + kind + " has no entry " + std::to_string(idx));
  return (*list)[static_cast<std::size_t>(idx)];
}

ojson validation_json(const ValidationReport& vr) {
  ojson j;
  j["ok"] = vr.ok;
  ojson issues = ojson::array();
  for (const auto& iss : vr.issues) {
    ojson e;
    e["code"] = iss.code;
    e["message"] = iss.message;
    issues.push_back(std::move(e));
  }
  j["issues"] = std::move(issues);
  return j;
}

void emit_validation(const ValidationReport& vr, const RunConfig& cfg,
                     std::ostream& out) {
  if (cfg.format == "text") {
    out << (vr.ok ? "validation OK" : "validation FAILED") << "\n";
    for (const auto& iss : vr.issues)
      out << "  " << iss.code << ": " << iss.message << "\n";
  } else {
    out << validation_json(vr).dump(2) << "\n";
  }
}

ojson vec_raw_json(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void put_number(ojson& j, const char* key, double x) {
  if (std::isfinite(x))
    j[key] = x;
  else
    j[key] = nullptr;
}

Tolerances config_tolerances(const RunConfig& cfg) {
  Tolerances tol;
  tol.q = cfg.tol_q;
  return tol;
}

bool validate_or_emit(const Problem& prob, const RunConfig& cfg,
                      std::ostream& out) {
  ValidationReport vr = validate(prob, config_tolerances(cfg));
  if (!vr.ok) emit_validation(vr, cfg, out);
  return vr.ok;
}

}  // namespace

Vec parse_point_arg(const std::string& arg) {
  std::vector<double> vals;
  std::size_t pos = 0;
  if (trimmed(arg).empty()) throw ParseError("point: empty coordinate list");
  while (true) {
    std::size_t comma = arg.find(',', pos);
    std::string tok = trimmed(
        arg.substr(pos, comma == std::string::npos ? std::string::npos
                                                   : comma - pos));
    vals.push_back(parse_double(tok, "point"));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  Vec out(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    out[static_cast<int>(i)] = vals[i];
  return out;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Problem prob = load_problem(cfg.input_path);
  ValidationReport vr = validate(prob, config_tolerances(cfg));
  emit_validation(vr, cfg, out);
  return vr.ok ? 0 : 1;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Problem prob = load_problem(cfg.input_path);
  if (!cfg.multipliers_path.empty())
    prob.multipliers = load_multipliers(cfg.multipliers_path, prob);
  if (!validate_or_emit(prob, cfg, out)) return 1;

  Vec x = parse_point_arg(cfg.point_arg);
  if (x.size() != prob.n)
    throw ParseError("point: expected " + std::to_string(prob.n) +
                     " coordinates, got " + std::to_string(x.size()));

  CertifyOptions opts;
  opts.tol = config_tolerances(cfg);
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  PointReport rep = certify_point(prob, x, opts);
  out << (cfg.format == "text" ? render_text(rep, opts)
                               : render_json(rep, opts));

  if (!rep.feasible) return 1;
  bool any_fail = false, any_inconclusive = false;
  for (const auto& c : rep.certificates) {
    if (c.status == CertStatus::kFailWitness) any_fail = true;
    if (c.status == CertStatus::kInconclusive) any_inconclusive = true;
  }
  if (any_fail) return 1;
  if (cfg.strict && any_inconclusive) return 3;
  return 0;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Problem prob = load_problem(cfg.input_path);
  if (!validate_or_emit(prob, cfg, out)) return 1;
  Vec x = parse_point_arg(cfg.point_arg);
  if (x.size() != prob.n)
    throw ParseError("point: expected " + std::to_string(prob.n) +
                     " coordinates, got " + std::to_string(x.size()));

  try {
    GrowthEstimate est = empirical_growth(prob, x, cfg.radius,
                                          cfg.oracle_samples, cfg.seed);
    LocalMinCheck lm = empirical_local_min(prob, x, cfg.radius,
                                           cfg.oracle_samples, cfg.seed);
    if (cfg.format == "text") {
      out << "radius          " << format_number(est.radius) << "\n";
      out << "samples         " << est.samples << "\n";
      out << "feasible        " << est.feasible_count << "\n";
      out << "rho_emp         "
          << (std::isfinite(est.rho_emp) ? format_number(est.rho_emp)
                                         : std::string("none"))
          << "\n";
      if (est.argmin.size() > 0) {
        out << "argmin          [";
        for (int i = 0; i < est.argmin.size(); ++i) {
          if (i) out << ", ";
          out << format_number(est.argmin[i]);
        }
        out << "]\n";
      }
      out << "local min       " << (lm.holds ? "yes" : "no")
          << " (worst gap " << format_number(lm.worst_gap) << ")\n";
      out << "parameters      radius=" << format_number(cfg.radius)
          << " samples=" << cfg.oracle_samples << " seed=" << cfg.seed
          << "\n";
    } else {
      ojson j;
      j["radius"] = est.radius;
      j["samples"] = est.samples;
      j["feasible_count"] = est.feasible_count;
      put_number(j, "rho_emp", est.rho_emp);
      j["argmin"] = vec_raw_json(est.argmin);
      ojson l;
      l["holds"] = lm.holds;
      put_number(l, "worst_gap", lm.worst_gap);
      l["worst"] = vec_raw_json(lm.worst);
      j["local_min"] = std::move(l);
      ojson params;
      params["radius"] = cfg.radius;
      params["samples"] = cfg.oracle_samples;
      params["seed"] = cfg.seed;
      j["parameters"] = std::move(params);
      out << j.dump(2) << "\n";
    }
    return 0;
  } catch (const TooFewFeasibleError& e) {
    err << "oracle abstains: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleError& e) {
    err << "oracle: " << e.what() << "\n";
    return 1;
  }
}

int cmd_taylor(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Problem prob = load_problem(cfg.input_path);
  if (!validate_or_emit(prob, cfg, out)) return 1;
  const PiecewiseFn& fn = select_fn(prob, cfg.fn);
  Vec a = parse_point_arg(cfg.a_arg);
  Vec b = parse_point_arg(cfg.b_arg);
  if (a.size() != prob.n || b.size() != prob.n)
    throw ParseError("taylor: endpoints must have " + std::to_string(prob.n) +
                     " coordinates");

  TaylorCheck tc = taylor_check(fn, a, b);
  if (cfg.format == "text") {
    out << "fn     " << cfg.fn << "\n";
    out << "delta  " << format_number(tc.delta) << "\n";
    out << "bounds [" << format_number(tc.lower) << ", "
        << format_number(tc.upper) << "]\n";
    out << "pass   " << (tc.pass ? "yes" : "no") << "\n";
  } else {
    ojson j;
    j["fn"] = cfg.fn;
    j["a"] = vec_raw_json(a);
    j["b"] = vec_raw_json(b);
    j["delta"] = tc.delta;
    j["lower"] = tc.lower;
    j["upper"] = tc.upper;
    j["pass"] = tc.pass;
    out << j.dump(2) << "\n";
  }
  return tc.pass ? 0 : 1;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "validate") return cmd_validate(cfg, out, err);
    if (cfg.command == "certify") return cmd_certify(cfg, out, err);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out, err);
    if (cfg.command == "taylor") return cmd_taylor(cfg, out, err);
    err << "unknown command '" << cfg.command << "'\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace optcert
