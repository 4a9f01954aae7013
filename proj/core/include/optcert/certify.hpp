#pragma once

#include "optcert/bundle.hpp"
#include "optcert/cone.hpp"
#include "optcert/multipliers.hpp"

#include <optional>
#include <string>
#include <vector>

namespace optcert {

enum class ConditionId { kFon, kSon, kSonIsolated, kSos, kMopFon, kMopSos };
enum class CertStatus {
  kProved,        // established in closed form
  kPassSampled,   // held on every sampled direction
  kFailWitness,   // refuted with a replayable direction
  kVacuous,       // nothing to check (trivial cone)
  kInconclusive,  // inside the decision band, or refutation without evidence
};

std::string to_string(ConditionId id);
std::string to_string(CertStatus s);

struct Witness {
  Vec v;          // direction in the checked cone
  double q = 0.0; // value that re-evaluates within 1e-9
};

// Serialized view of a checked cone: defining rows plus the generator
// representation when it was computed.
struct ConeSummary {
  std::vector<ConeRow> rows;
  RayBasis basis;
  bool basis_computed = false;
  bool trivial = false;
  std::string note;  // reason when the generator form is missing
};

// One objective component of the multiobjective critical-set union.
struct ComponentResult {
  int objective = 0;
  CertStatus status = CertStatus::kInconclusive;
  bool vacuous = false;
  ConeSummary cone;
  std::string method;
  std::optional<double> modulus;
  std::optional<Witness> witness;
};

struct Certificate {
  ConditionId id = ConditionId::kFon;
  CertStatus status = CertStatus::kInconclusive;
  bool vacuous = false;
  std::vector<std::string> assumptions;  // MSCQ_USER, LICQ_VERIFIED, ...
  std::string method;  // lp | multiplier | eigenvalue | ray | arc | sampled | vacuous
  std::optional<ConeSummary> cone;
  std::vector<Mat> bundle;           // Lagrangian Hessian bundle (second order)
  std::optional<double> modulus;     // growth modulus rho >= 0 (sufficient checks)
  std::optional<Witness> witness;
  std::optional<int> samples;        // present only when sampling decided
  std::optional<unsigned> seed;
  std::vector<ComponentResult> components;  // MOP_SOS only
  std::string detail;
};

struct CertifyOptions {
  Tolerances tol;
  int samples = 4096;
  unsigned seed = 42;
};

// Subregularity evidence: a user assertion or a verified classical CQ.
// Necessity claims from failed checks require at least one of them.
struct CqEvidence {
  bool mscq_asserted = false;
  LicqResult licq;
  MfcqResult mfcq;

  bool any() const { return mscq_asserted || licq.holds || mfcq.holds; }
  std::vector<std::string> tags() const;
};

struct MultiplierReport {
  std::string source;  // solved | user | none
  std::optional<MultiplierVector> mult;
  KKTResidual residual;             // populated when mult is present
  Vec farkas;                       // populated when the search refuted existence
  VertexEnumeration vertices;
  std::vector<std::string> issues;  // why a user candidate was rejected
};

struct PointReport {
  Vec x;
  bool feasible = false;
  std::vector<std::string> violations;
  ActiveSet active;
  CqEvidence cq;
  MultiplierReport multipliers;
  std::vector<Certificate> certificates;
};

// First-order necessary condition: <grad f, v> >= 0 on the linearization
// cone, decided by one LP over the cone intersected with the unit box.
Certificate first_order_necessary(const Problem& prob, const Vec& x,
                                  const ActiveSet& act, const CqEvidence& cq,
                                  const CertifyOptions& opts);

// Second-order necessary condition on the tightened cone: every direction
// admits a bundle member with nonnegative curvature.
Certificate second_order_necessary(const Problem& prob, const Vec& x,
                                   const ActiveSet& act,
                                   const MultiplierVector& mult,
                                   const CqEvidence& cq,
                                   const CertifyOptions& opts);

// Strict variant characterizing isolated local minimality of order 2.
Certificate second_order_necessary_isolated(const Problem& prob, const Vec& x,
                                            const ActiveSet& act,
                                            const MultiplierVector& mult,
                                            const CqEvidence& cq,
                                            const CertifyOptions& opts);

// Second-order sufficient condition on the critical cone: every bundle
// member has positive curvature on every nonzero critical direction.
// Needs no constraint qualification.
Certificate second_order_sufficient(const Problem& prob, const Vec& x,
                                    const ActiveSet& act,
                                    const MultiplierVector& mult,
                                    const CertifyOptions& opts);

// Multiobjective stationarity via weighted multipliers; refuted by a
// direction descending for every objective simultaneously.
Certificate mop_first_order(const Problem& prob, const Vec& x,
                            const ActiveSet& act, const CqEvidence& cq,
                            const CertifyOptions& opts);

// Component-wise sufficient condition over the critical-set union; every
// component must pass and the reported modulus is the worst one.
Certificate mop_second_order_sufficient(const Problem& prob, const Vec& x,
                                        const ActiveSet& act,
                                        const MultiplierVector& mult,
                                        const CertifyOptions& opts);

// Full pipeline: feasibility, active set, CQ evidence, multipliers (user
// candidates are validated, never trusted), then every applicable
// certificate. Deterministic for fixed options.
PointReport certify_point(const Problem& prob, const Vec& x,
                          const CertifyOptions& opts);

// Stable-key-order JSON document; numeric cone/bundle entries rounded to 12
// significant digits. Byte-identical for identical inputs and options.
std::string render_json(const PointReport& rep, const CertifyOptions& opts);
std::string render_text(const PointReport& rep, const CertifyOptions& opts);

}  // namespace optcert
