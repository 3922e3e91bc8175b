#include "opennca/hybridization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "opennca/errors.hpp"

namespace opennca::hybridization {

namespace {

// sin(x)/x without the 0/0 at the origin.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

void FlatBandParams::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ModelError("flat band: eta must be >= 0");
  if (!(w > 0.0) || !std::isfinite(w)) throw ModelError("flat band: w must be > 0");
}

// 2 sin(wt/2)/t = w * sinc(wt/2)
Complex flat_band_lesser(double t, const FlatBandParams& p) {
  const double x = 0.5 * p.w * t;
  return p.eta * (Complex(0.0, p.w * sinc(x)) * std::polar(1.0, x));
}

Complex flat_band_greater(double t, const FlatBandParams& p) {
  const double x = 0.5 * p.w * t;
  return p.eta * (Complex(0.0, -p.w * sinc(x)) * std::polar(1.0, -x));
}

HybridizationTable::HybridizationTable(double dt, std::vector<Complex> lesser, std::vector<Complex> greater,
                                       int xi)
    : dt_(dt), xi_(xi), lesser_(std::move(lesser)), greater_(std::move(greater)) {
  if (!(dt_ > 0.0)) throw GridError("hybridization table needs dt > 0");
  if (lesser_.size() != greater_.size() || lesser_.size() % 2 == 0 || lesser_.empty())
    throw GridError("hybridization table needs 2*steps+1 lesser and greater values");
  if (xi_ != 1 && xi_ != -1) throw ModelError("statistics sign xi must be +1 or -1");
  steps_ = static_cast<int>(lesser_.size() / 2);
}

std::size_t HybridizationTable::index(int lag) const {
  if (lag < -steps_ || lag > steps_)
    throw GridError("lag " + std::to_string(lag) + " outside tabulated range +-" + std::to_string(steps_));
  return static_cast<std::size_t>(lag + steps_);
}

Complex HybridizationTable::lesser(int lag) const { return lesser_[index(lag)]; }

Complex HybridizationTable::greater(int lag) const { return greater_[index(lag)]; }

Complex HybridizationTable::component(Branch g1, Branch g2, int lag, EqualTime tie) const {
  if (g1 != g2) return g1 == Branch::plus ? lesser(lag) : greater(lag);
  const bool first_later = lag > 0 || (lag == 0 && tie == EqualTime::first_later);
  // ++ is time ordered, -- anti-time ordered.
  if (g1 == Branch::plus) return first_later ? greater(lag) : lesser(lag);
  return first_later ? lesser(lag) : greater(lag);
}

int lag_index(double t1, double t2, double dt) {
  const double x = (t1 - t2) / dt;
  const double j = std::round(x);
  if (std::abs(x - j) > 1e-9 || !std::isfinite(x))
    throw GridError("time difference " + std::to_string(t1 - t2) + " is not a multiple of dt=" +
                    std::to_string(dt));
  return static_cast<int>(j);
}

Complex contour_component(Branch g1, Branch g2, double t1, double t2, const HybridizationTable& tab) {
  return tab.component(g1, g2, lag_index(t1, t2, tab.dt()), EqualTime::first_later);
}

HybridizationTable sample_flat_band(const FlatBandParams& p, double dt, int steps) {
  p.validate();
  if (!(dt > 0.0)) throw GridError("sample_flat_band: dt must be > 0");
  if (steps < 1) throw GridError("sample_flat_band: need at least one step");
  std::vector<Complex> lesser(2 * steps + 1), greater(2 * steps + 1);
  for (int j = -steps; j <= steps; ++j) {
    const double t = j * dt;
    lesser[j + steps] = flat_band_lesser(t, p);
    greater[j + steps] = flat_band_greater(t, p);
  }
  return HybridizationTable(dt, std::move(lesser), std::move(greater), -1);
}

namespace {

constexpr const char* kHeader = "t,re_lesser,im_lesser,re_greater,im_greater";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& field, const std::filesystem::path& path, int line) {
  const std::string f = trim(field);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(f, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (f.empty() || used != f.size())
    throw ParseError(path.string() + ":" + std::to_string(line) + ": malformed number '" + f + "'");
  return value;
}

}  // namespace

HybridizationTable load_tabulated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open hybridization file");
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::vector<double> times;
  std::vector<Complex> lesser, greater;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!have_header) {
      if (row != kHeader)
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected header '" + kHeader + "'");
      have_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(row);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 5)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns, got " +
                       std::to_string(fields.size()));
    times.push_back(parse_field(fields[0], path, lineno));
    lesser.emplace_back(parse_field(fields[1], path, lineno), parse_field(fields[2], path, lineno));
    greater.emplace_back(parse_field(fields[3], path, lineno), parse_field(fields[4], path, lineno));
  }
  if (!have_header) throw ParseError(path.string() + ": empty hybridization file");
  if (times.size() < 3 || times.size() % 2 == 0)
    throw GridError(path.string() + ": need an odd number (>= 3) of rows symmetric about t = 0");

  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw GridError(path.string() + ": times must be strictly ascending");
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - dt) > 1e-9 * dt)
      throw GridError(path.string() + ": non-uniform time grid at row " + std::to_string(k + 1));
  }
  const std::size_t steps = times.size() / 2;
  if (std::abs(times[steps]) > 1e-9 * dt || std::abs(times.front() + times.back()) > 1e-9 * dt)
    throw GridError(path.string() + ": grid must cover [-t_max, t_max] symmetrically about t = 0");
  return HybridizationTable(dt, std::move(lesser), std::move(greater), -1);
}

void save_tabulated(const std::filesystem::path& path, const HybridizationTable& tab) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << kHeader << '\n';
  char buf[160];
  for (int j = -tab.steps(); j <= tab.steps(); ++j) {
    const Complex l = tab.lesser(j), g = tab.greater(j);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", j * tab.dt(), l.real(), l.imag(),
                  g.real(), g.imag());
    out << buf;
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace opennca::hybridization
