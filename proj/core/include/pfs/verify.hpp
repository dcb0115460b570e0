#ifndef PFS_VERIFY_HPP
#define PFS_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfs/instance_io.hpp"
#include "pfs/problem.hpp"

namespace pfs {

// Options for the property suites. `samples` scales every suite (random
// points per instance for the pointwise sweeps, runs for the envelope suite,
// seeds for the hindsight suite). `contraction_scale` multiplies the
// contraction factor used by the contraction suite; it exists so tests can
// confirm the suite rejects a tighter factor than the true one (1.0 is the
// real check). `custom` replaces the default quadratic/box base instance.
struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 2024;
  double contraction_scale = 1.0;
  std::optional<InstanceSpec> custom;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  long checked = 0;
  long skipped = 0;
  std::string counterexample;  // compact JSON of the first failure, empty if none
};

// Declarative form of the default d=2 quadratic/box instance.
InstanceSpec quadratic_box_spec(std::uint64_t seed = 1, int horizon = 2000);

// Random polytope instance with a certified (epsilon, sigma) pair: unit box
// rows keep the feasible set inside the unit ball, extra random unit-normal
// rows keep a known Slater margin at the origin, converted by
// slater_certificate with split 1/2.
ProblemInstance make_random_certified_instance(std::uint64_t seed, int horizon = 8);

// Feasibility-step equivalence: the hinge update equals halfspace projection
// followed by ball projection, coordinatewise within 1e-12.
SuiteResult verify_halfspace_equivalence(const VerifyOptions& opts);

// Error bound dist <= [g+rho]+/sigma + 1e-9 on random ball points, on the
// base instance and 5 random certified polytopes.
SuiteResult verify_error_bound(const VerifyOptions& opts);

// Feasibility-step contraction dist^2 <= gamma dist^2 + 1e-9 on the same
// sampling plan, plus deterministic corner-directed probes on the default
// instance.
SuiteResult verify_contraction(const VerifyOptions& opts);

// Regret/violation guarantee envelopes for random (step, tightening) draws
// spanning the preset magnitudes at T=2000, alternating origin/random starts,
// plus the three presets with their individual guarantees.
SuiteResult verify_guarantee_envelopes(const VerifyOptions& opts);

// Closed-form hindsight optimum against the iterative reference solver,
// within 1e-6, across random stream seeds.
SuiteResult verify_hindsight_equivalence(const VerifyOptions& opts);

// All five suites in the order above.
std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opts);

}  // namespace pfs

#endif  // PFS_VERIFY_HPP
