#include "smfg/io.hpp"

#include <fmt/core.h>
#include <fmt/os.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smfg {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_trader_csv(const std::filesystem::path& file, const TimeGrid& g,
                      const std::vector<std::pair<int, TraderPath>>& samples) {
  auto out = fmt::output_file(file.string());
  out.print("# t=t control=nu_hat_t inventory=Q_hat_t sample_id=trader index\n");
  out.print("t,control,inventory,sample_id\n");
  for (const auto& [id, path] : samples)
    for (int k = 0; k <= g.n; ++k)
      out.print("{},{},{},{}\n", num(g.t(k)), num(path.control.values[k]), num(path.inventory[k]), id);
}

void write_A_csv(const std::filesystem::path& file, const TimeGrid& g, const Curve& a_prime, const Curve& A) {
  auto out = fmt::output_file(file.string());
  out.print("# t=t A_prime=A'_t A=A_t\n");
  out.print("t,A_prime,A\n");
  for (int k = 0; k <= g.n; ++k) out.print("{},{},{}\n", num(g.t(k)), num(a_prime[k]), num(A[k]));
}

void write_broker_csv(const std::filesystem::path& file, const TimeGrid& g, const BrokerPath& path) {
  auto out = fmt::output_file(file.string());
  out.print("# t=t broker_control=nu_hat^B_t broker_inventory=Q^B_t\n");
  out.print("t,broker_control,broker_inventory\n");
  for (int k = 0; k <= g.n; ++k)
    out.print("{},{},{}\n", num(g.t(k)), num(path.control.values[k]), num(path.inventory[k]));
}

void write_policy_csv(const std::filesystem::path& file, const RevelationPolicy& pol, double objective,
                      bool degenerate) {
  auto out = fmt::output_file(file.string());
  out.print("# decision=reveal|never|degenerate t_c=critical time objective=-E[mu]^2 A_0 - Var(mu) A_t_c\n");
  out.print("decision,t_c,objective\n");
  if (degenerate)
    out.print("degenerate,{},{}\n", pol.t_c ? num(*pol.t_c) : std::string("never"), num(objective));
  else if (pol.t_c)
    out.print("reveal,{},{}\n", num(*pol.t_c), num(objective));
  else
    out.print("never,never,{}\n", num(objective));
}

void write_population_csv(const std::filesystem::path& file, const PopulationResult& pop) {
  auto out = fmt::output_file(file.string());
  out.print("# kind=bin|mean|std time=t bin_left,bin_right=inventory bin edges count=paths in bin (value for mean/std rows)\n");
  out.print("kind,time,bin_left,bin_right,count\n");
  for (const auto& s : pop.snapshots) {
    for (std::size_t j = 0; j < s.counts.size(); ++j)
      out.print("bin,{},{},{},{}\n", num(s.time), num(s.bin_edges[j]), num(s.bin_edges[j + 1]), s.counts[j]);
    out.print("mean,{},,,{}\n", num(s.time), num(s.mean));
    out.print("std,{},,,{}\n", num(s.time), num(s.std));
  }
}

void write_finite_n_csv(const std::filesystem::path& file, const ConvergenceReport& rep) {
  auto out = fmt::output_file(file.string());
  out.print("# N=number of traders repeat=replication e1=sup_t|avg nu - nubar|^2 e2=sup_t|avg nu^2 - Mbar|\n");
  out.print("N,repeat,e1,e2\n");
  for (const auto& r : rep.records) out.print("{},{},{},{}\n", r.N, r.repeat, num(r.e1), num(r.e2));
  out.print("slope,,{},{}\n", num(rep.slope_e1), num(rep.slope_e2));
}

void write_price_csv(const std::filesystem::path& file, const TimeGrid& g, const std::vector<Curve>& paths) {
  auto out = fmt::output_file(file.string());
  out.print("# t=t path_j=S_t on path j\n");
  out.print("t");
  for (std::size_t j = 0; j < paths.size(); ++j) out.print(",path_{}", j);
  out.print("\n");
  for (int k = 0; k <= g.n; ++k) {
    out.print("{}", num(g.t(k)));
    for (const Curve& c : paths) out.print(",{}", num(c[k]));
    out.print("\n");
  }
}

void write_coefficients_csv(const std::filesystem::path& file, const Equilibrium& eq) {
  auto out = fmt::output_file(file.string());
  out.print(
      "# t=t abar=Abar_t bbar=Bbar_t dbar=Dbar_t beta3=beta^3_t gamma=gamma_t gamma_B=gamma^B_t abarB=Abar^B_t "
      "dbarB=Dbar^B_t ahatB=Ahat^B_t bhatB=Bhat^B_t dhatB=Dhat^B_t\n");
  out.print("t,abar,bbar,dbar,beta3,gamma,gamma_B,abarB,dbarB,ahatB,bhatB,dhatB\n");
  const auto& tr = eq.trader;
  const auto& bc = eq.broker;
  for (int k = 0; k <= eq.grid.n; ++k)
    out.print("{},{},{},{},{},{},{},{},{},{},{},{}\n", num(eq.grid.t(k)), num(tr.abar[k]), num(tr.bbar[k]),
              num(tr.dbar[k]), num(tr.beta.beta3[k]), num(eq.trader_kernels.ric.gamma[k]),
              num(eq.broker_ric.gamma[k]), num(bc.betas.abarB[k]), num(bc.betas.dbarB[k]), num(bc.ahatB[k]),
              num(bc.bhatB[k]), num(bc.dhatB[k]));
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (t.comment.empty()) t.comment = line;
      continue;
    }
    if (t.header.empty())
      t.header = split(line);
    else
      t.rows.push_back(split(line));
  }
  return t;
}

}  // namespace smfg
