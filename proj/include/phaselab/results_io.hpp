#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phaselab/experiment.hpp"

namespace phaselab {

inline constexpr const char* kCsvHeader =
    "N,sigma,R0,trial,product_error,sign_error,objective,converged";

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);

// Row data as CSV; summaries are recomputed on load.
void export_results(const ResultsTable& table, const std::string& path);
std::vector<ResultRow> load_results(const std::string& path);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

std::string summaries_to_json(const std::vector<CellSummary>& summaries);

}  // namespace phaselab
