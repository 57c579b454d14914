#include "romtopt/objective.hpp"

namespace romtopt {

std::unique_ptr<Objective> make_objective(const std::string& name, const Vector& load) {
  if (name == "compliance") return std::make_unique<ComplianceObjective>(load);
  if (name == "quadratic-test") return std::make_unique<QuadraticTestObjective>(load);
  throw std::invalid_argument("unknown objective '" + name +
                              "' (available: compliance, quadratic-test)");
}

}  // namespace romtopt
