#pragma once

#include "otsense/sample.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace otsense {

/// X ~ N((1,1,1), Sigma) with unit variances and 0.5 correlations, Y = X A^T
/// with A = [[4, -2, 1], [2, 5, -1]]. Columns X1..X3 and Y1, Y2.
SensitivityDataset gen_linear_gaussian(Index n, std::uint64_t seed);

/// The linear map used by gen_linear_gaussian.
Matrix linear_gaussian_matrix();

// Spruce budworm / forest model.

struct BudwormParams {
  double r_b, K, beta, alpha, r_s, K_s, K_e, r_e, P, T_e;
};

enum class BudwormIntegrator { adaptive, rk4 };

struct BudwormOptions {
  std::vector<double> times;  ///< empty = 0, 1, ..., 150
  std::array<double, 3> initial{0.1, 7.0, 1.0};
  /// Predation term beta B^2 / ((alpha S)^2 + B^2) instead of the default
  /// beta B^2 / ((alpha^S)^2 + B^2).
  bool product_predation = false;
  BudwormIntegrator integrator = BudwormIntegrator::adaptive;
  double rk4_step = 0.1;
  double rtol = 1e-9;
  double atol = 1e-12;
  unsigned threads = 0;
};

/// (dB, dS, dE) at state (B, S, E).
std::array<double, 3> budworm_rhs(const BudwormParams& p, const std::array<double, 3>& state,
                                  bool product_predation = false);

/// Trajectory of one parameter set on the option's time grid.
std::vector<std::array<double, 3>> budworm_trajectory(const BudwormParams& p, const BudwormOptions& opts = {});

struct BudwormSample {
  SampleMatrix x;  ///< r_b, K, beta, alpha, r_s, K_s, K_e, r_e, P, T_e
  SampleMatrix B;  ///< one column per time point, named by the time
  SampleMatrix S;
  SampleMatrix E;
  SensitivityDataset dataset_B() const { return SensitivityDataset::create(x, B); }
  SensitivityDataset dataset_S() const { return SensitivityDataset::create(x, S); }
  SensitivityDataset dataset_E() const { return SensitivityDataset::create(x, E); }
};

/// Inputs uniform on their ranges (see budworm_ranges()). A row whose
/// integration fails raises NumericalError naming the row.
BudwormSample gen_budworm(Index n, std::uint64_t seed, const BudwormOptions& opts = {});

struct UniformRange {
  const char* name;
  double low;
  double high;
};
const std::vector<UniformRange>& budworm_ranges();

// Carbon-cycle / temperature recursion.

struct ClimateParams {
  double phi11, phi23, c1, c3, c4, lambda, S, F_EX0, F_EX1;
};

struct ClimateOptions {
  /// Emissions per period (GtC); empty = the built-in 18-period path.
  std::vector<double> emissions;
  /// M_AT, M_UO, M_LO, T_AT, T_OC
  std::array<double, 5> initial{851.0, 460.0, 1740.0, 0.85, 0.0068};
  unsigned threads = 0;
};

/// Built-in emissions path (GtCO2 values divided by 3.666).
std::vector<double> default_emissions();

/// Atmospheric temperature anomaly for each period.
std::vector<double> climate_trajectory(const ClimateParams& p, const ClimateOptions& opts = {});

const std::vector<UniformRange>& climate_ranges();

/// Inputs phi11 .. F_EX1 uniform on their ranges; outputs T_AT_1 .. T_AT_T.
SensitivityDataset gen_climate(Index n, std::uint64_t seed, const ClimateOptions& opts = {});

}  // namespace otsense
