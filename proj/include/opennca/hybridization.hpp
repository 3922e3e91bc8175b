#pragma once

#include <filesystem>
#include <vector>

#include "opennca/types.hpp"

/// Bath hybridization function Delta^{gg'}(t, t') on a uniform time grid.
namespace opennca::hybridization {

/// Zero-temperature, particle-hole symmetric flat band.
struct FlatBandParams {
  double eta = 0.0;  ///< coupling strength
  double w = 1.0;    ///< band parameter entering the closed forms

  void validate() const;
};

/// Delta^{+-}(t) = 2 i eta e^{i w t/2} sin(w t/2) / t, with the t -> 0 limit i eta w.
Complex flat_band_lesser(double t, const FlatBandParams& p);
/// Delta^{-+}(t) = -2 i eta e^{-i w t/2} sin(w t/2) / t, with the t -> 0 limit -i eta w.
Complex flat_band_greater(double t, const FlatBandParams& p);

/// How a same-branch component resolves when its two time arguments coincide.
/// `first_later` takes the limit t1 -> t2+ (first argument later in real time),
/// `first_earlier` the limit t1 -> t2-.
enum class EqualTime { first_later, first_earlier };

/// Two-sided table of lesser/greater values at lags j*dt, j = -steps..steps.
class HybridizationTable {
 public:
  HybridizationTable() = default;
  /// Arrays hold lags -steps..steps in ascending order (size 2*steps+1).
  HybridizationTable(double dt, std::vector<Complex> lesser, std::vector<Complex> greater, int xi = -1);

  double dt() const noexcept { return dt_; }
  int steps() const noexcept { return steps_; }
  int xi() const noexcept { return xi_; }

  /// Delta^{+-} at lag j*dt; GridError outside -steps..steps.
  Complex lesser(int lag) const;
  /// Delta^{-+} at lag j*dt.
  Complex greater(int lag) const;

  /// Delta^{g1 g2}(t1, t2) with t1 - t2 = lag*dt.
  Complex component(Branch g1, Branch g2, int lag, EqualTime tie = EqualTime::first_later) const;

  const std::vector<Complex>& lesser_values() const noexcept { return lesser_; }
  const std::vector<Complex>& greater_values() const noexcept { return greater_; }

 private:
  std::size_t index(int lag) const;

  double dt_ = 0.0;
  int steps_ = 0;
  int xi_ = -1;
  std::vector<Complex> lesser_;
  std::vector<Complex> greater_;
};

/// Integer lag (t1 - t2)/dt; GridError if off-grid by more than 1e-9*dt.
int lag_index(double t1, double t2, double dt);

/// Contour-ordered component Delta^{g1 g2}(t1, t2). Equal times resolve as
/// the limit t1 -> t2+, so Delta^{++}(t,t) = Delta^{-+}(t,t) and
/// Delta^{--}(t,t) = Delta^{+-}(t,t).
Complex contour_component(Branch g1, Branch g2, double t1, double t2, const HybridizationTable& tab);

HybridizationTable sample_flat_band(const FlatBandParams& p, double dt, int steps);

/// CSV with header `t,re_lesser,im_lesser,re_greater,im_greater`, rows ascending
/// in t over [-t_max, t_max].
HybridizationTable load_tabulated(const std::filesystem::path& path);
void save_tabulated(const std::filesystem::path& path, const HybridizationTable& tab);

}  // namespace opennca::hybridization
