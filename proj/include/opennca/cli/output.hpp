#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opennca/analysis.hpp"

namespace opennca::cli {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Writes `content` to a sibling temp file, then renames it over `path`.
/// Throws IoError; on failure no partial file is left at `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Header `t,n,trace_err`.
std::string occupation_csv(const analysis::ObservableSeries& n, const std::vector<double>& trace_err);

/// Header `t,abs_lambda_0,...,abs_lambda_{N^2-1},unit_eig_err`.
std::string spectrum_csv(const analysis::SpectrumSeries& spectrum);

/// Header `t,re_rho_0_0,im_rho_0_0,...,min_eig`.
std::string states_csv(const std::vector<OperatorMatrix>& states, double dt, const std::vector<double>& min_eig);

}  // namespace opennca::cli
