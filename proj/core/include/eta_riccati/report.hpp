#pragma once

// Table, figure and validation-suite generation behind the command-line
// tool. Everything here returns data or strings; file and exit-code
// handling live in tools/.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eta_riccati/mc.hpp"
#include "eta_riccati/riccati.hpp"

namespace eta_riccati {

inline constexpr double kEulerGamma = 0.57721566490153286;
inline constexpr double kLog2 = 0.69314718055994531;
/// Catalan's constant G = beta(2) = eta_2(2).
inline constexpr double kCatalan = 0.91596559417721902;

/// eta'(1) for a = 1: gamma log 2 - (log 2)^2 / 2.
double eta1_prime_at_one();

inline const std::vector<double> kTableA{1.0, 2.0, 10.0, 11.0};
inline const std::vector<double> kTableT{0.5, 1.0, 2.0, 4.0, 30.0};
inline const std::vector<int> kConvergenceN{5, 10, 20, 30};

struct TableRow {
  double a = 0.0;
  double t = 0.0;
  double phi = 0.0;
  double phi_e = 0.0;
  double phi_as = 0.0;
  double ratio = 0.0;
  bool converged = false;
  double max_error = 0.0;
};

/// One row per (a, t) in a-major order; points are evaluated in parallel.
std::vector<TableRow> riccati_table(const std::vector<double>& a_values, const std::vector<double>& t_values,
                                    const EvalOptions& opts = {});

/// Fixed 4-decimal rendering. Non-converged rows carry a trailing `*`.
std::string format_riccati_markdown(const std::vector<TableRow>& rows);

std::string format_riccati_csv(const std::vector<TableRow>& rows, const std::string& flags);

/// Fixed-point text with `decimals` places.
std::string fixed(double value, int decimals);

struct ConvergenceRow {
  int N = 0;
  double value_k0 = 0.0;
  double err_k0 = 0.0;
  double value_k1 = 0.0;
  double err_k1 = 0.0;
  double bound_k0 = 0.0;
  double bound_k1 = 0.0;
};

struct ConvergenceTable {
  double a = 1.0;
  double t = 1.0;
  double reference_k0 = 0.0;
  double reference_k1 = 0.0;
  /// "closed form" at (1, 1), otherwise "double-double fast series, N = 80".
  std::string reference_source;
  std::vector<ConvergenceRow> rows;
};

ConvergenceTable convergence_table(double a, double t, const std::vector<int>& n_values,
                                   Precision precision = Precision::binary64);

std::string format_convergence_markdown(const ConvergenceTable& table);
std::string format_convergence_csv(const ConvergenceTable& table, const std::string& flags);

struct FigureGrid {
  double t_lo = 0.05;
  double t_hi = 8.0;
  int points = 400;
  /// Step of the symmetric difference used for phi' in panel 4.
  double h = 1e-4;
};

struct FigureFile {
  std::string name;
  std::string contents;
  /// Grid points that failed to converge and were written as empty fields.
  int missing = 0;
};

/// Four CSVs per a: eta(t); phi vs phi_as; q(t); phi' vs -phi^2.
std::vector<FigureFile> figure_data(const std::vector<double>& a_values, const FigureGrid& grid,
                                    const EvalOptions& opts, const std::string& flags);

struct McCheck {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  /// Allowed deviation in units of std_error.
  double band = 4.0;
  bool pass = false;
};

/// The Monte Carlo validation suite: Gamma moments, S_k Laplace transforms,
/// the Gamma expectation of f_a and of its first two derivatives.
std::vector<McCheck> mc_validation_suite(const McConfig& cfg);

std::string format_mc_checks(const std::vector<McCheck>& checks);

/// Evaluate f(i) for i in [0, count) on worker_count() threads, results in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& f);

}  // namespace eta_riccati

#include "eta_riccati/detail/parallel_map.hpp"
