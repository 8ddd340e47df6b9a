#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "smfg/broker.hpp"
#include "smfg/equilibrium.hpp"
#include "smfg/finite_game.hpp"
#include "smfg/simulate.hpp"

namespace smfg {

// Every CSV starts with one '#' line naming the symbol behind each column,
// followed by a plain header row.

void write_trader_csv(const std::filesystem::path& file, const TimeGrid& g,
                      const std::vector<std::pair<int, TraderPath>>& samples);

void write_A_csv(const std::filesystem::path& file, const TimeGrid& g, const Curve& a_prime, const Curve& A);

void write_broker_csv(const std::filesystem::path& file, const TimeGrid& g, const BrokerPath& path);

// decision is "reveal", "never" or "degenerate".
void write_policy_csv(const std::filesystem::path& file, const RevelationPolicy& pol, double objective,
                      bool degenerate);

void write_population_csv(const std::filesystem::path& file, const PopulationResult& pop);

void write_finite_n_csv(const std::filesystem::path& file, const ConvergenceReport& rep);

// One column per simulated price path.
void write_price_csv(const std::filesystem::path& file, const TimeGrid& g, const std::vector<Curve>& paths);

void write_coefficients_csv(const std::filesystem::path& file, const Equilibrium& eq);

// Minimal reader for the files above: skips the comment line, returns the
// header and the rows as strings.
struct CsvTable {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& file);

}  // namespace smfg
