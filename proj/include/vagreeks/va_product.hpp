#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace vag {

/// Annual death probabilities q_x for consecutive integer ages.
class MortalityTable {
public:
    MortalityTable() = default;
    MortalityTable(int first_age, std::vector<double> q);

    /// q_x = 1 - exp(-int_x^{x+1} (A + B c^s) ds) for ages [first_age, last_age].
    static MortalityTable gompertz_makeham(int first_age, int last_age, double a, double b, double c);
    /// Stand-in male table used when no file is supplied: A = 5e-4,
    /// B = 3.5e-5, c = 1.094, ages 65..95.
    static MortalityTable default_male65();

    /// Plain text, one header line, then "age q" rows with consecutive ages.
    static MortalityTable load(const std::filesystem::path& path);

    int first_age() const noexcept { return first_age_; }
    int last_age() const noexcept { return first_age_ + static_cast<int>(q_.size()) - 1; }
    bool covers(int from_age, int to_age) const noexcept {
        return !q_.empty() && from_age >= first_age_ && to_age <= last_age();
    }
    /// Throws std::out_of_range outside the table.
    double q(int age) const;

private:
    int first_age_ = 0;
    std::vector<double> q_;
};

/// dF_t/dS0 rule at the zero floor of the fund.
enum class FundFloorRule {
    indicator,    // 1{(F_{t-1} - I_{t-1})(1+R_t) > 0} (dF_{t-1} - dI_{t-1})(1+R_t)
    literal_max,  // max((dF_{t-1} - dI_{t-1})(1+R_t), 0)
};

/// Stylised GMWB contract. The fund starts at F_0 = P S_0 with
/// P = premium / issue level; the guarantee base starts at the premium.
struct ProductSpec {
    double premium = 10000.0;
    double withdrawal_rate = 0.04;    // w
    double guarantee_charge = 0.01;   // mu, taken from the withdrawal
    double fund_charge = 0.0125;      // eta, deducted from the annual return
    int ratchet_years = 10;           // alpha
    double ratchet_cap = 1.15;        // max year-on-year growth of G
    int term = 30;                    // T
    double lapse_rate = 0.04;
    int issue_age = 65;
    MortalityTable mortality = MortalityTable::default_male65();
    /// false: G_0 is the premium and does not move with S_0 (default).
    /// true:  G_0 = P S_0 scales with S_0 like the fund.
    bool guarantee_follows_equity = false;
    FundFloorRule floor_rule = FundFloorRule::indicator;

    void validate() const;
    double net_income_rate() const noexcept { return withdrawal_rate - guarantee_charge; }
};

/// p_surv_t for t = 0..T (p[0] = 1).
struct SurvivalCurve {
    std::vector<double> p;
};

/// Per-year fund, guarantee base, income and shortfall, t = 0..T.
struct CashflowTrace {
    std::vector<double> fund;
    std::vector<double> base;
    std::vector<double> income;
    std::vector<double> shortfall;
};

/// dF_t/dS0, dG_t/dS0, dI_t/dS0 for t = 0..T.
struct CashflowSensitivities {
    std::vector<double> fund;
    std::vector<double> base;
    std::vector<double> income;
};

/// Mortality and lapse treated as independent decrements.
SurvivalCurve survival_curve(const ProductSpec& spec);

/// Guarantee base after the year-t ratchet.
double ratchet_base(const ProductSpec& spec, int year, double previous_base, double fund);

/// Runs the fund/base/income recursions along annual equity levels S_0..S_T.
/// `issue_level` is the index level at which the premium was invested; it
/// fixes P = premium / issue_level so that bumping S_0 moves F_0 only.
CashflowTrace project_cashflows(const ProductSpec& spec, std::span<const double> annual_equity, double issue_level);
inline CashflowTrace project_cashflows(const ProductSpec& spec, std::span<const double> annual_equity) {
    return project_cashflows(spec, annual_equity, annual_equity[0]);
}

/// sum_t D_t p_t max(I_t - F_t, 0) over t = 1..T.
double liability_sample(const CashflowTrace& trace, std::span<const double> discount, const SurvivalCurve& surv);

/// Pathwise recursions for the cashflow derivatives, holding the annual
/// returns S_t / S_{t-1} fixed.
CashflowSensitivities pathwise_cashflow_derivatives(const ProductSpec& spec, const CashflowTrace& trace,
                                                    std::span<const double> annual_equity, double issue_level);

/// sum_t D_t p_t 1{I_t > F_t} (dI_t - dF_t).
double pathwise_liability_delta(const CashflowTrace& trace, const CashflowSensitivities& sens,
                                std::span<const double> discount, const SurvivalCurve& surv);

}  // namespace vag
