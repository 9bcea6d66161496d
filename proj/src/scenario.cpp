#include "vagreeks/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vagreeks/errors.hpp"

namespace vag {

void ModelParams::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0)) throw std::invalid_argument(std::string(name) + " must be strictly positive");
    };
    positive(kappa_v, "kappa_v");
    positive(theta_v, "theta_v");
    positive(sigma_v, "sigma_v");
    positive(kappa_r, "kappa_r");
    positive(theta_r, "theta_r");
    positive(sigma_r, "sigma_r");
    if (!(v0 >= 0.0)) throw std::invalid_argument("v0 must be non-negative");
    if (!(r0 >= 0.0)) throw std::invalid_argument("r0 must be non-negative");
    for (double rho : {rho_sv, rho_sr, rho_vr}) {
        if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("correlations must lie in [-1, 1]");
    }
}

CholeskyFactor cholesky_factor(double rho_sv, double rho_sr, double rho_vr) {
    // Correlation matrix in (V, r, S) order.
    const double rho[3][3] = {
        {1.0, rho_vr, rho_sv},
        {rho_vr, 1.0, rho_sr},
        {rho_sv, rho_sr, 1.0},
    };
    CholeskyFactor f;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = rho[i][j];
            for (int k = 0; k < j; ++k) s -= f.a[i][k] * f.a[j][k];
            if (i == j) {
                if (!(s > 0.0)) {
                    throw NonPositiveDefinite("correlation matrix is not positive-definite (pivot " +
                                              std::to_string(i + 1) + " = " + std::to_string(s) + ")");
                }
                f.a[i][i] = std::sqrt(s);
            } else {
                f.a[i][j] = s / f.a[j][j];
            }
        }
    }
    return f;
}

void evolve_factor_path(const ModelParams& p, const CholeskyFactor& chol, TimeGrid grid,
                        std::span<const double> z1, std::span<const double> z2, FactorPath& out) {
    const int n = grid.steps();
    if (grid.steps_per_year < 1 || grid.years < 1) throw std::invalid_argument("grid needs >= 1 step/year and >= 1 year");
    if (z1.size() < static_cast<std::size_t>(n) || z2.size() < static_cast<std::size_t>(n)) {
        throw std::invalid_argument("factor draws shorter than the grid");
    }
    out.grid = grid;
    out.variance.resize(n + 1);
    out.rate.resize(n + 1);
    out.z1.assign(z1.begin(), z1.begin() + n);
    out.z2.assign(z2.begin(), z2.begin() + n);
    out.discount.resize(grid.years + 1);

    const double dt = grid.dt();
    const double sdt = std::sqrt(dt);
    const double a21 = chol(1, 0);
    const double a22 = chol(1, 1);

    double v = p.v0;
    double r = p.r0;
    double int_r = 0.0;
    out.variance[0] = std::max(v, 0.0);
    out.rate[0] = std::max(r, 0.0);
    out.discount[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        const double vp = out.variance[i];
        const double rp = out.rate[i];
        const double zv = z1[i];
        const double zr = a21 * z1[i] + a22 * z2[i];
        v += p.kappa_v * (p.theta_v - vp) * dt + p.sigma_v * std::sqrt(vp) * zv * sdt;
        r += p.kappa_r * (p.theta_r - rp) * dt + p.sigma_r * std::sqrt(rp) * zr * sdt;
        int_r += rp * dt;
        out.variance[i + 1] = std::max(v, 0.0);
        out.rate[i + 1] = std::max(r, 0.0);
        if ((i + 1) % grid.steps_per_year == 0) out.discount[(i + 1) / grid.steps_per_year] = std::exp(-int_r);
    }
}

void simulate_factor_path(const ModelParams& params, const CholeskyFactor& chol, TimeGrid grid,
                          const NormalStream& stream, std::uint32_t outer, FactorPath& out) {
    const int n = grid.steps();
    out.z1.resize(n);
    out.z2.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto [a, b] = stream.pair(outer, 0, static_cast<std::uint32_t>(i), Lane::factors);
        out.z1[i] = a;
        out.z2[i] = b;
    }
    // evolve_factor_path copies the draws; hand it independent spans.
    std::vector<double> z1 = std::move(out.z1);
    std::vector<double> z2 = std::move(out.z2);
    evolve_factor_path(params, chol, grid, z1, z2, out);
}

FactorPath simulate_factor_path(const ModelParams& params, const CholeskyFactor& chol, TimeGrid grid,
                                const NormalStream& stream, std::uint32_t outer) {
    FactorPath out;
    simulate_factor_path(params, chol, grid, stream, outer, out);
    return out;
}

void draw_equity_shocks(const NormalStream& stream, std::uint32_t outer, std::uint32_t inner,
                        std::span<double> z3) {
    const std::size_t n = z3.size();
    for (std::size_t block = 0; 2 * block < n; ++block) {
        const auto [a, b] = stream.pair(outer, inner, static_cast<std::uint32_t>(block), Lane::equity);
        z3[2 * block] = a;
        if (2 * block + 1 < n) z3[2 * block + 1] = b;
    }
}

void simulate_equity_path(const FactorPath& factors, double s0, const CholeskyFactor& chol,
                          std::span<const double> z3, std::span<double> level) {
    const int n = factors.grid.steps();
    if (z3.size() < static_cast<std::size_t>(n) || level.size() < static_cast<std::size_t>(n + 1)) {
        throw std::invalid_argument("equity draws or output shorter than the grid");
    }
    const double dt = factors.grid.dt();
    const double sdt = std::sqrt(dt);
    const double a31 = chol(2, 0);
    const double a32 = chol(2, 1);
    const double a33 = chol(2, 2);

    double x = 0.0;
    level[0] = s0;
    for (int i = 0; i < n; ++i) {
        const double v = factors.variance[i];
        const double zs = a31 * factors.z1[i] + a32 * factors.z2[i] + a33 * z3[i];
        x += (factors.rate[i] - 0.5 * v) * dt + std::sqrt(v) * zs * sdt;
        level[i + 1] = s0 * std::exp(x);
    }
}

void annual_levels(const TimeGrid& grid, std::span<const double> level, std::span<double> annual) {
    for (int y = 0; y <= grid.years; ++y) annual[y] = level[grid.annual_index(y)];
}

ConditionalBlock conditional_moments(const FactorPath& f, const CholeskyFactor& chol, int years,
                                     Quadrature quadrature) {
    if (years < 1 || years > f.grid.years) throw std::invalid_argument("conditioning horizon outside the path");
    const int n = years * f.grid.steps_per_year;
    const double dt = f.grid.dt();
    const double sdt = std::sqrt(dt);
    const double a31 = chol(2, 0);
    const double a32 = chol(2, 1);
    const double a33 = chol(2, 2);

    double int_v = 0.0;
    double int_r = 0.0;
    double stoch = 0.0;
    for (int i = 0; i < n; ++i) {
        if (quadrature == Quadrature::trapezoid) {
            int_v += 0.5 * (f.variance[i] + f.variance[i + 1]) * dt;
            int_r += 0.5 * (f.rate[i] + f.rate[i + 1]) * dt;
        } else {
            int_v += f.variance[i] * dt;
            int_r += f.rate[i] * dt;
        }
        stoch += std::sqrt(f.variance[i]) * (a31 * f.z1[i] + a32 * f.z2[i]) * sdt;
    }

    const double horizon = static_cast<double>(years);
    ConditionalBlock b;
    b.horizon = horizon;
    b.sigma_bar = std::sqrt(a33 * a33 * int_v / horizon);
    b.r_bar = int_r / horizon;
    b.xi_bar = std::exp(-0.5 * (a31 * a31 + a32 * a32) * int_v + stoch);
    if (!(b.sigma_bar > 0.0)) {
        throw DegenerateVolatility("conditional volatility is zero: integrated variance vanishes over the horizon");
    }
    return b;
}

double implied_shock(double s_t, double s0, const ConditionalBlock& block) {
    if (!(block.sigma_bar > 0.0)) throw DegenerateVolatility("implied shock needs sigma_bar > 0");
    if (!(s_t > 0.0) || !(s0 > 0.0)) throw std::invalid_argument("implied shock needs positive prices");
    const double t = block.horizon;
    return (std::log(s_t / (block.xi_bar * s0)) - (block.r_bar - 0.5 * block.sigma_bar * block.sigma_bar) * t) /
           (block.sigma_bar * std::sqrt(t));
}

}  // namespace vag
