#include "romtopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace romtopt {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Row {
  std::string problem, method, eps, tau, final_J, hdm, rom, cost;
};

std::vector<Row> table_rows(const std::vector<RunReport>& reports, const std::vector<double>& eps) {
  std::vector<Row> rows;
  for (const auto& r : reports) {
    for (double e : eps) {
      Row row{r.problem, r.method, fmt("%g", e), fmt("%g", r.tau), "-", "-", "-", "-"};
      CutoffResult c;
      if (const CutoffResult* found = r.cutoff(e)) {
        c = *found;
      } else if (r.has_reference()) {
        c = compute_cutoffs(r.log, r.J_star, {e}, r.nu).front();
      }
      if (c.reached) {
        row.final_J = fmt("%.4f", c.J);
        row.hdm = std::to_string(c.n_hdm);
        row.rom = std::to_string(c.n_rom);
        row.cost = fmt("%.2f", c.cost);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

const CutoffResult* RunReport::cutoff(double eps) const {
  for (const auto& c : cutoffs)
    if (c.eps == eps) return &c;
  return nullptr;
}

double equivalent_cost(long n_hdm, long n_rom, double nu) {
  return static_cast<double>(n_hdm) + nu * static_cast<double>(n_rom);
}

std::vector<CutoffResult> compute_cutoffs(const std::vector<IterationLog>& log, double J_star,
                                          const std::vector<double>& eps, double nu) {
  std::vector<CutoffResult> out;
  for (double e : eps) {
    CutoffResult c;
    c.eps = e;
    for (const auto& it : log) {
      if (std::abs(it.J - J_star) < e * std::abs(J_star)) {
        c.reached = true;
        c.iteration = it.n;
        c.n_hdm = it.hdm;
        c.n_rom = it.rom;
        c.cost = equivalent_cost(it.hdm, it.rom, nu);
        c.J = it.J;
        break;
      }
    }
    out.push_back(c);
  }
  return out;
}

std::string run_log_csv(const RunReport& report) {
  std::ostringstream os;
  os << "n,J,hdm,rom,delta,ratio,accepted,theta,basis,termination,volume\n";
  for (const auto& it : report.log) {
    os << it.n << ',' << fmt("%.17g", it.J) << ',' << it.hdm << ',' << it.rom << ','
       << fmt("%.17g", it.delta) << ',' << fmt("%.17g", it.ratio) << ',' << it.accepted << ','
       << fmt("%.17g", it.theta) << ',' << it.basis << ',' << fmt("%.17g", it.termination) << ','
       << fmt("%.17g", it.volume) << '\n';
  }
  return os.str();
}

std::vector<IterationLog> parse_run_log_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<IterationLog> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    IterationLog it;
    char c;
    std::istringstream ls(line);
    if (!(ls >> it.n >> c >> it.J >> c >> it.hdm >> c >> it.rom >> c >> it.delta >> c >> it.ratio >> c >>
          it.accepted >> c >> it.theta >> c >> it.basis >> c >> it.termination >> c >> it.volume)) {
      throw std::runtime_error("malformed run log line: " + line);
    }
    out.push_back(it);
  }
  return out;
}

std::string report_table_csv(const std::vector<RunReport>& reports, const std::vector<double>& eps) {
  std::ostringstream os;
  os << "problem,method,eps,tau,final_objective,hdm_solves,rom_solves,cost\n";
  for (const auto& r : table_rows(reports, eps)) {
    os << r.problem << ',' << r.method << ',' << r.eps << ',' << r.tau << ',' << r.final_J << ',' << r.hdm
       << ',' << r.rom << ',' << r.cost << '\n';
  }
  return os.str();
}

std::string report_table(const std::vector<RunReport>& reports, const std::vector<double>& eps) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-12s %8s %6s %16s %8s %8s %10s\n", "problem", "method", "eps", "tau",
                "final objective", "# HDM", "# ROM", "cost");
  os << buf;
  for (const auto& r : table_rows(reports, eps)) {
    std::snprintf(buf, sizeof buf, "%-12s %-12s %8s %6s %16s %8s %8s %10s\n", r.problem.c_str(),
                  r.method.c_str(), r.eps.c_str(), r.tau.c_str(), r.final_J.c_str(), r.hdm.c_str(),
                  r.rom.c_str(), r.cost.c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace romtopt
