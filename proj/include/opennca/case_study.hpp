#pragma once

#include <filesystem>
#include <optional>

#include "opennca/hybridization.hpp"
#include "opennca/liouville.hpp"
#include "opennca/nca.hpp"

/// Single spinless fermionic level with Markovian loss, pump and dephasing,
/// hybridized with a fermionic bath. Basis: |0> empty (index 0), |1> occupied.
namespace opennca::case_study {

struct ModelParams {
  double eps0 = 0.0;
  double gamma_l = 0.0;  ///< loss, jump d
  double gamma_p = 0.0;  ///< pump, jump d^dag
  double gamma_d = 0.0;  ///< dephasing, jump d^dag d
};

struct BathConfig {
  enum class Kind { flat_band, tabulated };
  Kind kind = Kind::flat_band;
  double eta = 0.0;
  double w = 1.0;
  std::filesystem::path path;
};

struct GridConfig {
  double dt = 0.0;
  double t_max = 0.0;

  /// round(t_max / dt)
  int steps() const;
};

/// Either a basis projector |k><k| or an explicit 2x2 density matrix.
struct InitialState {
  std::optional<int> basis_label;
  std::optional<OperatorMatrix> matrix;
};

struct OutputOptions {
  bool occupation = true;
  bool spectrum = true;
  bool states = false;
  std::filesystem::path out_dir = "out";
};

struct RunConfig {
  ModelParams model;
  BathConfig bath;
  GridConfig grid;
  InitialState initial_state;
  OutputOptions outputs;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// d = |0><1|
OperatorMatrix annihilator();

liouville::LindbladModel lindblad_model(const ModelParams& p);

/// Flat band sampled on the run grid, or the tabulated file (checked against the grid).
hybridization::HybridizationTable bath_table(const RunConfig& cfg);

nca::NcaProblem make_problem(const RunConfig& cfg);

OperatorMatrix initial_density(const RunConfig& cfg);

}  // namespace opennca::case_study
