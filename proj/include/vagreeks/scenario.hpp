#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vagreeks/rng.hpp"

namespace vag {

/// Heston variance + CIR short rate + equity correlation parameters.
/// Rates and variances are annualised.
struct ModelParams {
    double kappa_v = 2.0;
    double theta_v = 0.04;
    double sigma_v = 0.15;
    double v0 = 0.04;
    double kappa_r = 0.4;
    double theta_r = 0.04;
    double sigma_r = 0.1;
    double r0 = 0.04;
    double rho_sv = -0.7;
    double rho_sr = -0.3;
    double rho_vr = 0.2;

    /// Throws std::invalid_argument on non-positive kappa/theta/sigma,
    /// negative initial values or correlations outside [-1, 1].
    void validate() const;
};

/// Lower-triangular A with A A' = rho, rows ordered (V, r, S).
struct CholeskyFactor {
    std::array<std::array<double, 3>, 3> a{};

    double operator()(int row, int col) const { return a[row][col]; }
};

/// Throws NonPositiveDefinite when a pivot is not strictly positive.
CholeskyFactor cholesky_factor(double rho_sv, double rho_sr, double rho_vr);
inline CholeskyFactor cholesky_factor(const ModelParams& p) {
    return cholesky_factor(p.rho_sv, p.rho_sr, p.rho_vr);
}

/// Uniform simulation grid 0 = t0 < ... < tN with N = steps_per_year * years.
struct TimeGrid {
    int steps_per_year = 20;
    int years = 1;

    int steps() const noexcept { return steps_per_year * years; }
    double dt() const noexcept { return 1.0 / steps_per_year; }
    double time(int i) const noexcept { return static_cast<double>(i) / steps_per_year; }
    /// Grid index of the end of year `year`.
    int annual_index(int year) const noexcept { return year * steps_per_year; }
};

enum class Quadrature { left_riemann, trapezoid };

/// Outer scenario: variance and rate paths with the independent draws that
/// drove them. `variance` and `rate` hold the truncated values max(x, 0) that
/// enter drift, diffusion, discounting and quadrature.
struct FactorPath {
    TimeGrid grid;
    std::vector<double> variance;  // N+1
    std::vector<double> rate;      // N+1
    std::vector<double> z1;        // N, drives V
    std::vector<double> z2;        // N, with z1 drives r
    std::vector<double> discount;  // years+1, D at annual dates, D[0] = 1
};

/// Full-truncation Euler for V and r driven by Z_V = Z1, Z_r = a21 Z1 + a22 Z2.
/// The draws are taken from `stream` at (outer, 0, step, Lane::factors).
void simulate_factor_path(const ModelParams& params, const CholeskyFactor& chol, TimeGrid grid,
                          const NormalStream& stream, std::uint32_t outer, FactorPath& out);
FactorPath simulate_factor_path(const ModelParams& params, const CholeskyFactor& chol, TimeGrid grid,
                                const NormalStream& stream, std::uint32_t outer);

/// Same scheme driven by caller-supplied draws (size N each).
void evolve_factor_path(const ModelParams& params, const CholeskyFactor& chol, TimeGrid grid,
                        std::span<const double> z1, std::span<const double> z2, FactorPath& out);

/// Z3 draws for inner path `inner` of outer path `outer`.
void draw_equity_shocks(const NormalStream& stream, std::uint32_t outer, std::uint32_t inner,
                        std::span<double> z3);

/// Log-Euler equity path: per step
///   dX = (r - V/2) dt + sqrt(V) (a31 Z1 + a32 Z2 + a33 Z3) sqrt(dt),
/// S = S0 exp(X). `level` receives N+1 values.
void simulate_equity_path(const FactorPath& factors, double s0, const CholeskyFactor& chol,
                          std::span<const double> z3, std::span<double> level);

/// Equity levels at the annual dates 0..years of a grid path.
void annual_levels(const TimeGrid& grid, std::span<const double> level, std::span<double> annual);

/// Year-T conditional quantities shared by all inner paths of one outer path.
struct ConditionalBlock {
    double sigma_bar = 0.0;  // sqrt(a33^2/T int_0^T V dt)
    double xi_bar = 1.0;     // exp(Y_T)
    double r_bar = 0.0;      // (1/T) int_0^T r dt
    double horizon = 1.0;    // T in years
};

/// Conditional moments over [0, years]. Throws DegenerateVolatility if the
/// integrated variance is zero.
ConditionalBlock conditional_moments(const FactorPath& factors, const CholeskyFactor& chol, int years = 1,
                                     Quadrature quadrature = Quadrature::left_riemann);

/// Z* = [ln(S_T / (xi S0)) - (r_bar - sigma_bar^2/2) T] / (sigma_bar sqrt(T)).
double implied_shock(double s_t, double s0, const ConditionalBlock& block);

}  // namespace vag
