#ifndef PFS_INSTANCE_IO_HPP
#define PFS_INSTANCE_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pfs/problem.hpp"

namespace pfs {

// Declarative form of a problem instance as carried by config files:
// {"d","R","G_f","G_g","sigma","epsilon","rows":[[a,b],...],"seed","T"}
// where each row is [coefficient list, offset]. The stored G_g must agree
// with max_i ||a_i|| (relative tolerance 1e-9); the computed value is
// authoritative.
struct InstanceSpec {
  int dim = 0;
  double radius = 0.0;
  double cost_grad_bound = 0.0;
  double cons_grad_bound = 0.0;
  double sigma = 0.0;
  double epsilon = 0.0;
  std::vector<ConstraintModel::Row> rows;
  std::uint64_t seed = 0;
  int horizon = 0;

  // Instance with the embedded seed/horizon.
  ProblemInstance instantiate() const;
  // Instance with an overridden stream (same geometry and constants).
  ProblemInstance instantiate(std::uint64_t seed_override, int horizon_override) const;
};

// Parse a JSON document (text) into a validated InstanceSpec.
// Throws std::invalid_argument with a diagnostic on malformed input.
InstanceSpec parse_instance_spec(const std::string& json_text);

// Load from a file path; throws std::runtime_error when unreadable.
InstanceSpec load_instance_spec(const std::string& path);

// Convenience: load and instantiate in one step.
ProblemInstance load_instance(const std::string& path);

}  // namespace pfs

#endif  // PFS_INSTANCE_IO_HPP
