#include "romtopt/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace romtopt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define ROMTOPT_DOUBLE(name, member)                                                         \
  {name, Field{[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); }, \
               [](const RunConfig& c) { return fmt(c.member); }}}
#define ROMTOPT_INT(name, member)                                                            \
  {name, Field{[](RunConfig& c, const std::string& k, const std::string& v) {                \
                 c.member = static_cast<decltype(c.member)>(to_long(k, v));                  \
               },                                                                            \
               [](const RunConfig& c) { return std::to_string(c.member); }}}
#define ROMTOPT_BOOL(name, member)                                                           \
  {name, Field{[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); }, \
               [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }}}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      ROMTOPT_DOUBLE("tau", tr.tau),
      ROMTOPT_DOUBLE("gamma1", tr.gamma1),
      ROMTOPT_DOUBLE("gamma2", tr.gamma2),
      ROMTOPT_DOUBLE("eta1", tr.eta1),
      ROMTOPT_DOUBLE("eta2", tr.eta2),
      ROMTOPT_DOUBLE("delta_max_factor", tr.delta_max_factor),
      ROMTOPT_INT("n_max", tr.n_max),
      ROMTOPT_INT("window", tr.window),
      ROMTOPT_INT("max_inner", tr.max_inner),
      ROMTOPT_INT("backtrack_steps", tr.backtrack_steps),
      ROMTOPT_BOOL("warm_start_mma", tr.warm_start_mma),
      ROMTOPT_DOUBLE("inner_step_tol", tr.inner_step_tol),
      ROMTOPT_BOOL("push_rejected", tr.push_rejected),
      ROMTOPT_DOUBLE("termination_tol", tr.termination_tol),
      ROMTOPT_BOOL("check_assumptions", tr.check_assumptions),
      ROMTOPT_BOOL("enforce_assumptions", tr.enforce_assumptions),
      ROMTOPT_BOOL("monitor_fcd", tr.monitor_fcd),
      ROMTOPT_DOUBLE("fcd_kappa", tr.fcd_kappa),
      ROMTOPT_DOUBLE("fcd_kappa_prime", tr.fcd_kappa_prime),
      ROMTOPT_DOUBLE("mma_asyinit", tr.mma.asyinit),
      ROMTOPT_DOUBLE("mma_asyincr", tr.mma.asyincr),
      ROMTOPT_DOUBLE("mma_asydecr", tr.mma.asydecr),
      ROMTOPT_DOUBLE("mma_move", tr.mma.move),
      ROMTOPT_DOUBLE("mma_asymin", tr.mma.asymin),
      ROMTOPT_DOUBLE("mma_asymax", tr.mma.asymax),
      ROMTOPT_DOUBLE("mma_albefa", tr.mma.albefa),
      ROMTOPT_DOUBLE("mma_raa0", tr.mma.raa0),
      ROMTOPT_DOUBLE("cost_nu", cost_nu),
      {"eps", Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                      std::vector<double> out;
                      std::stringstream ss(v);
                      std::string item;
                      while (std::getline(ss, item, ',')) {
                        item = trim(item);
                        if (!item.empty()) out.push_back(to_double(k, item));
                      }
                      if (out.empty()) throw std::invalid_argument("config key 'eps': empty list");
                      for (double e : out)
                        if (!(e > 0.0)) throw std::invalid_argument("config key 'eps': tolerances must be positive");
                      c.eps = out;
                    },
                    [](const RunConfig& c) {
                      std::string s;
                      for (double e : c.eps) s += (s.empty() ? "" : ",") + fmt(e);
                      return s;
                    }}},
      ROMTOPT_INT("max_iters", max_iters),
      ROMTOPT_INT("reference_iters", reference_iters),
      ROMTOPT_BOOL("stop_at_cutoff", stop_at_cutoff),
      ROMTOPT_DOUBLE("E0", E0),
      ROMTOPT_DOUBLE("poisson", poisson),
      {"plane", Field{[](RunConfig& c, const std::string&, const std::string& v) {
                        if (v == "stress") c.plane = PlaneModel::Stress;
                        else if (v == "strain") c.plane = PlaneModel::Strain;
                        else throw std::invalid_argument("config key 'plane': expected stress or strain");
                      },
                      [](const RunConfig& c) {
                        return std::string(c.plane == PlaneModel::Stress ? "stress" : "strain");
                      }}},
      ROMTOPT_DOUBLE("rho_min", rho_min),
      ROMTOPT_DOUBLE("penal", penal),
      ROMTOPT_DOUBLE("filter_r_over_R", filter_r_over_R),
      ROMTOPT_INT("snapshot_every", snapshot_every),
      ROMTOPT_INT("seed", seed),
      ROMTOPT_DOUBLE("psi0_noise", psi0_noise),
      {"reference_dir", Field{[](RunConfig& c, const std::string&, const std::string& v) { c.reference_dir = v; },
                              [](const RunConfig& c) { return c.reference_dir; }}},
  };
  return table;
}

#undef ROMTOPT_DOUBLE
#undef ROMTOPT_INT
#undef ROMTOPT_BOOL

const Field& find_field(const std::string& key) {
  for (const auto& [name, field] : fields())
    if (name == key) return field;
  throw std::invalid_argument("unknown config key '" + key + "'");
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "hdm-mma") return Method::HdmMma;
  if (name == "rom-tr-res") return Method::RomTrRes;
  if (name == "rom-tr-dist") return Method::RomTrDist;
  if (name == "rom-fix-res") return Method::RomFixRes;
  throw std::invalid_argument("unknown method '" + name +
                              "' (available: hdm-mma, rom-tr-res, rom-tr-dist, rom-fix-res)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::HdmMma: return "hdm-mma";
    case Method::RomTrRes: return "rom-tr-res";
    case Method::RomTrDist: return "rom-tr-dist";
    case Method::RomFixRes: return "rom-fix-res";
  }
  return "?";
}

std::vector<std::string> method_names() { return {"hdm-mma", "rom-tr-res", "rom-tr-dist", "rom-fix-res"}; }

void RunConfig::set(const std::string& key, const std::string& value) {
  find_field(key).set(*this, key, trim(value));
}

std::string RunConfig::get(const std::string& key) const { return find_field(key).get(*this); }

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.first);
  return out;
}

void RunConfig::load_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_string(ss.str());
}

std::string RunConfig::dump() const {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(*this) + "\n";
  return out;
}

ProblemSpec RunConfig::apply(ProblemSpec spec) const {
  spec.E0 = E0;
  spec.poisson = poisson;
  spec.plane = plane;
  spec.material.rho_min = rho_min;
  spec.material.penal = penal;
  spec.filter_r_over_R = filter_r_over_R;
  return spec;
}

std::uint64_t RunConfig::reference_hash(const ProblemSpec& spec) const {
  std::string key = apply(spec).describe();
  key += "reference_iters=" + std::to_string(reference_iters) + "\n";
  for (const char* k : {"mma_asyinit", "mma_asyincr", "mma_asydecr", "mma_move", "mma_asymin",
                        "mma_asymax", "mma_albefa", "mma_raa0", "seed", "psi0_noise"}) {
    key += std::string(k) + "=" + get(k) + "\n";
  }
  return hash_string(key);
}

}  // namespace romtopt
