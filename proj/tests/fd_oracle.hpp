#pragma once

// Finite-difference oracle for the cashflow recursions. The recursions are
// re-evaluated here in long double with the initial level bumped to
// S0(1 +- eps) and the path's annual returns held fixed; paths where a branch
// of the recursion changes inside the bump window are flagged as excluded.
// Working in extended precision keeps the difference quotient accurate on
// paths where the fund nearly cancels against the income.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "vagreeks/va_product.hpp"

namespace oracle {

using Real = long double;

struct Trace {
    std::vector<Real> fund, base, income;
    std::vector<int> branch;  // per year: floor | ratchet step-up/cap | shortfall
};

inline Trace project(const vag::ProductSpec& spec, std::span<const double> s, double issue_level, Real scale) {
    const int horizon = spec.term;
    const Real units = static_cast<Real>(spec.premium) / issue_level;
    const Real cap = spec.ratchet_cap;
    const Real net = static_cast<Real>(spec.withdrawal_rate) - static_cast<Real>(spec.guarantee_charge);
    Trace tr;
    tr.fund.assign(horizon + 1, 0);
    tr.base.assign(horizon + 1, 0);
    tr.income.assign(horizon + 1, 0);
    tr.branch.assign(horizon + 1, 0);
    tr.fund[0] = units * s[0] * scale;
    tr.base[0] = spec.guarantee_follows_equity ? tr.fund[0] : static_cast<Real>(spec.premium);
    for (int t = 1; t <= horizon; ++t) {
        const Real growth = static_cast<Real>(s[t]) / s[t - 1] - spec.fund_charge;
        const Real carried = (tr.fund[t - 1] - tr.income[t - 1]) * growth;
        int code = carried > 0 ? 1 : 0;
        tr.fund[t] = std::max(carried, Real(0));
        const Real f = tr.fund[t], g = tr.base[t - 1];
        if (t <= spec.ratchet_years) {
            if (f < g) {
                tr.base[t] = g;
            } else if (f <= cap * g) {
                tr.base[t] = f;
                code |= 2;
            } else {
                tr.base[t] = cap * g;
                code |= 4;
            }
        } else {
            tr.base[t] = g;
        }
        tr.income[t] = net * tr.base[t];
        code |= tr.income[t] > tr.fund[t] ? 8 : 0;
        tr.branch[t] = code;
    }
    return tr;
}

struct FdComparison {
    bool trace_ok = true;    // library trace agrees with the extended-precision one
    bool excluded = false;   // a branch flips inside the bump window
    double worst_rel = 0.0;  // max relative error over fund, base and income derivatives
};

inline std::vector<double> scaled(std::span<const double> s, double factor) {
    std::vector<double> out(s.begin(), s.end());
    for (double& x : out) x *= factor;
    return out;
}

inline FdComparison compare(const vag::ProductSpec& spec, std::span<const double> s, double issue_level,
                            double eps = 1e-5) {
    FdComparison c;
    const auto lib = vag::project_cashflows(spec, s, issue_level);
    const Trace mid = project(spec, s, issue_level, 1);
    auto close = [](const std::vector<double>& a, const std::vector<Real>& b) {
        for (std::size_t t = 0; t < b.size(); ++t) {
            if (std::abs(a[t] - static_cast<double>(b[t])) > 1e-9 + 1e-12 * std::abs(static_cast<double>(b[t]))) {
                return false;
            }
        }
        return true;
    };
    c.trace_ok = close(lib.fund, mid.fund) && close(lib.base, mid.base) && close(lib.income, mid.income);

    const Trace up = project(spec, s, issue_level, 1 + static_cast<Real>(eps));
    const Trace dn = project(spec, s, issue_level, 1 - static_cast<Real>(eps));
    if (up.branch != mid.branch || dn.branch != mid.branch) {
        c.excluded = true;
        return c;
    }
    const auto d = vag::pathwise_cashflow_derivatives(spec, lib, s, issue_level);
    const Real h = 2 * static_cast<Real>(eps) * s[0];
    auto check = [&](const std::vector<Real>& pu, const std::vector<Real>& pd, const std::vector<double>& pw) {
        for (std::size_t t = 0; t < pw.size(); ++t) {
            const double fd = static_cast<double>((pu[t] - pd[t]) / h);
            const double scale = std::max(std::abs(pw[t]), 1e-9);
            c.worst_rel = std::max(c.worst_rel, std::abs(fd - pw[t]) / scale);
        }
    };
    check(up.fund, dn.fund, d.fund);
    check(up.base, dn.base, d.base);
    check(up.income, dn.income, d.income);
    return c;
}

}  // namespace oracle
