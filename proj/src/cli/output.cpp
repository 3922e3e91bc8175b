#include "opennca/cli/output.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "opennca/errors.hpp"

namespace opennca::cli {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError(tmp.string() + ": write failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError(path.string() + ": " + ec.message());
  }
}

std::string occupation_csv(const analysis::ObservableSeries& n, const std::vector<double>& trace_err) {
  std::string out = "t,n,trace_err\n";
  for (std::size_t j = 0; j < n.values.size(); ++j) {
    out += format_double(n.times[j]);
    out += ',';
    out += format_double(n.values[j]);
    out += ',';
    out += format_double(trace_err[j]);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const analysis::SpectrumSeries& spectrum) {
  std::string out = "t";
  const std::size_t count = spectrum.eigenvalues.empty() ? 0 : spectrum.eigenvalues.front().size();
  for (std::size_t k = 0; k < count; ++k) out += ",abs_lambda_" + std::to_string(k);
  out += ",unit_eig_err\n";
  for (std::size_t j = 0; j < spectrum.times.size(); ++j) {
    out += format_double(spectrum.times[j]);
    for (const auto& lambda : spectrum.eigenvalues[j]) {
      out += ',';
      out += format_double(std::abs(lambda));
    }
    out += ',';
    out += format_double(spectrum.unit_eig_err[j]);
    out += '\n';
  }
  return out;
}

std::string states_csv(const std::vector<OperatorMatrix>& states, double dt, const std::vector<double>& min_eig) {
  std::string out = "t";
  const Eigen::Index n = states.empty() ? 0 : states.front().rows();
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::string idx = std::to_string(r) + "_" + std::to_string(c);
      out += ",re_rho_" + idx + ",im_rho_" + idx;
    }
  out += ",min_eig\n";
  for (std::size_t j = 0; j < states.size(); ++j) {
    out += format_double(static_cast<double>(j) * dt);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        out += ',';
        out += format_double(states[j](r, c).real());
        out += ',';
        out += format_double(states[j](r, c).imag());
      }
    out += ',';
    out += format_double(min_eig[j]);
    out += '\n';
  }
  return out;
}

}  // namespace opennca::cli
