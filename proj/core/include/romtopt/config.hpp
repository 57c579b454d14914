#pragma once

#include "romtopt/problem.hpp"
#include "romtopt/trust_region.hpp"

#include <string>
#include <utility>
#include <vector>

namespace romtopt {

enum class Method { HdmMma, RomTrRes, RomTrDist, RomFixRes };

Method parse_method(const std::string& name);
std::string to_string(Method method);
std::vector<std::string> method_names();

/// All tunable run parameters. Read from flat `key = value` text, where `#`
/// starts a comment; unknown keys are errors.
struct RunConfig {
  TrConfig tr;
  double cost_nu = 0.01;
  std::vector<double> eps = {0.01, 0.001};
  int max_iters = 300;
  int reference_iters = 2000;
  bool stop_at_cutoff = true;
  double E0 = 1.0;
  double poisson = 0.3;
  PlaneModel plane = PlaneModel::Stress;
  double rho_min = 1e-3;
  double penal = 3.0;
  double filter_r_over_R = 0.28867513459481287;
  int snapshot_every = 0;
  std::uint64_t seed = 0;
  /// Amplitude of a seeded uniform perturbation added to psi0 (then projected).
  double psi0_noise = 0.0;
  std::string reference_dir = "references";

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static std::vector<std::string> keys();

  void load_file(const std::string& path);
  void load_string(const std::string& text);
  /// `key = value` lines for every key, in `keys()` order.
  std::string dump() const;

  /// Copies the physical settings into a problem spec.
  ProblemSpec apply(ProblemSpec spec) const;
  /// Key of a cached reference run: changes with anything that affects it.
  std::uint64_t reference_hash(const ProblemSpec& spec) const;
};

}  // namespace romtopt
