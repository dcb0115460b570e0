#include "pfs/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pfs {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("instance config: missing numeric field \"") +
                                key + "\"");
  }
  return j.at(key).get<double>();
}

std::int64_t require_integer(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw std::invalid_argument(std::string("instance config: missing integer field \"") +
                                key + "\"");
  }
  return j.at(key).get<std::int64_t>();
}

}  // namespace

ProblemInstance InstanceSpec::instantiate() const {
  return instantiate(seed, horizon);
}

ProblemInstance InstanceSpec::instantiate(std::uint64_t seed_override,
                                          int horizon_override) const {
  return ProblemInstance(ConstraintModel(rows),
                         CostStream::generate(seed_override, horizon_override, dim),
                         radius, cost_grad_bound, sigma, epsilon);
}

InstanceSpec parse_instance_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance config: JSON parse error: ") +
                                e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("instance config: top level must be an object");
  }

  InstanceSpec spec;
  spec.dim = static_cast<int>(require_integer(j, "d"));
  spec.radius = require_number(j, "R");
  spec.cost_grad_bound = require_number(j, "G_f");
  spec.cons_grad_bound = require_number(j, "G_g");
  spec.sigma = require_number(j, "sigma");
  spec.epsilon = require_number(j, "epsilon");
  spec.seed = static_cast<std::uint64_t>(require_integer(j, "seed"));
  spec.horizon = static_cast<int>(require_integer(j, "T"));

  if (spec.dim < 1) {
    throw std::invalid_argument("instance config: d must be >= 1");
  }
  if (!j.contains("rows") || !j.at("rows").is_array() || j.at("rows").empty()) {
    throw std::invalid_argument("instance config: \"rows\" must be a nonempty array");
  }
  for (const json& jr : j.at("rows")) {
    if (!jr.is_array() || jr.size() != 2 || !jr.at(0).is_array() ||
        !jr.at(1).is_number()) {
      throw std::invalid_argument(
          "instance config: each row must be [[a_1,...,a_d], b]");
    }
    const json& ja = jr.at(0);
    if (static_cast<int>(ja.size()) != spec.dim) {
      throw std::invalid_argument("instance config: row coefficient count != d");
    }
    ConstraintModel::Row row;
    row.a = Vec(spec.dim);
    for (int k = 0; k < spec.dim; ++k) {
      if (!ja.at(k).is_number()) {
        throw std::invalid_argument("instance config: row coefficients must be numbers");
      }
      row.a[k] = ja.at(k).get<double>();
    }
    row.b = jr.at(1).get<double>();
    spec.rows.push_back(std::move(row));
  }

  double computed_gg = 0.0;
  for (const auto& r : spec.rows) computed_gg = std::max(computed_gg, r.a.norm());
  const double gg_tol = 1e-9 * std::max(1.0, computed_gg);
  if (std::abs(spec.cons_grad_bound - computed_gg) > gg_tol) {
    std::ostringstream msg;
    msg << "instance config: G_g=" << spec.cons_grad_bound
        << " disagrees with max row norm " << computed_gg;
    throw std::invalid_argument(msg.str());
  }
  spec.cons_grad_bound = computed_gg;

  // Surface constant violations here with the file context; instantiate()
  // would reject them anyway.
  spec.instantiate(spec.seed, std::max(spec.horizon, 1));
  if (spec.horizon < 1) {
    throw std::invalid_argument("instance config: T must be >= 1");
  }
  return spec;
}

InstanceSpec load_instance_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("instance config: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_spec(buf.str());
}

ProblemInstance load_instance(const std::string& path) {
  return load_instance_spec(path).instantiate();
}

}  // namespace pfs
