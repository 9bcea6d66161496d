#include "vagreeks/va_product.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vag {

MortalityTable::MortalityTable(int first_age, std::vector<double> q) : first_age_(first_age), q_(std::move(q)) {
    for (double x : q_) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("mortality probabilities must lie in [0, 1]");
    }
}

MortalityTable MortalityTable::gompertz_makeham(int first_age, int last_age, double a, double b, double c) {
    if (last_age < first_age) throw std::invalid_argument("empty age range");
    std::vector<double> q;
    q.reserve(last_age - first_age + 1);
    const double log_c = std::log(c);
    for (int x = first_age; x <= last_age; ++x) {
        const double hazard = a + b * std::pow(c, x) * (c - 1.0) / log_c;
        q.push_back(-std::expm1(-hazard));
    }
    return MortalityTable(first_age, std::move(q));
}

MortalityTable MortalityTable::default_male65() {
    return gompertz_makeham(65, 95, 5e-4, 3.5e-5, 1.094);
}

MortalityTable MortalityTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mortality table " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("mortality table " + path.string() + " is empty");

    int first = 0;
    int expected = 0;
    std::vector<double> q;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        int age;
        double qx;
        if (!(row >> age >> qx)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected '<age> <q>'");
        }
        if (q.empty()) {
            first = age;
        } else if (age != expected) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": ages must be consecutive");
        }
        expected = age + 1;
        q.push_back(qx);
    }
    if (q.empty()) throw std::runtime_error("mortality table " + path.string() + " has no rows");
    return MortalityTable(first, std::move(q));
}

double MortalityTable::q(int age) const {
    if (age < first_age_ || age > last_age()) {
        throw std::out_of_range("age " + std::to_string(age) + " outside mortality table");
    }
    return q_[age - first_age_];
}

void ProductSpec::validate() const {
    if (!(premium > 0.0)) throw std::invalid_argument("premium must be positive");
    if (!(guarantee_charge >= 0.0 && guarantee_charge <= withdrawal_rate && withdrawal_rate < 1.0)) {
        throw std::invalid_argument("need 0 <= guarantee charge <= withdrawal rate < 1");
    }
    if (!(fund_charge >= 0.0 && fund_charge < 1.0)) throw std::invalid_argument("fund charge must lie in [0, 1)");
    if (term < 1) throw std::invalid_argument("term must be at least one year");
    if (ratchet_years < 0 || ratchet_years > term) throw std::invalid_argument("ratchet window must lie in [0, term]");
    if (!(ratchet_cap > 1.0)) throw std::invalid_argument("ratchet cap must exceed 1");
    if (!(lapse_rate >= 0.0 && lapse_rate < 1.0)) throw std::invalid_argument("lapse rate must lie in [0, 1)");
    if (!mortality.covers(issue_age, issue_age + term - 1)) {
        throw std::invalid_argument("mortality table must cover ages " + std::to_string(issue_age) + ".." +
                                    std::to_string(issue_age + term - 1));
    }
}

SurvivalCurve survival_curve(const ProductSpec& spec) {
    SurvivalCurve s;
    s.p.resize(spec.term + 1);
    s.p[0] = 1.0;
    double alive = 1.0;
    double in_force = 1.0;
    for (int t = 1; t <= spec.term; ++t) {
        alive *= 1.0 - spec.mortality.q(spec.issue_age + t - 1);
        in_force *= 1.0 - spec.lapse_rate;
        s.p[t] = alive * in_force;
    }
    return s;
}

double ratchet_base(const ProductSpec& spec, int year, double previous_base, double fund) {
    if (year > spec.ratchet_years) return previous_base;
    return std::min(std::max(previous_base, fund), spec.ratchet_cap * previous_base);
}

CashflowTrace project_cashflows(const ProductSpec& spec, std::span<const double> s, double issue_level) {
    const int horizon = spec.term;
    if (s.size() < static_cast<std::size_t>(horizon + 1)) throw std::invalid_argument("need equity levels S_0..S_T");
    const double units = spec.premium / issue_level;

    CashflowTrace tr;
    tr.fund.resize(horizon + 1);
    tr.base.resize(horizon + 1);
    tr.income.resize(horizon + 1);
    tr.shortfall.resize(horizon + 1);
    tr.fund[0] = units * s[0];
    tr.base[0] = spec.guarantee_follows_equity ? units * s[0] : spec.premium;
    tr.income[0] = 0.0;
    tr.shortfall[0] = 0.0;

    const double net = spec.net_income_rate();
    for (int t = 1; t <= horizon; ++t) {
        const double growth = s[t] / s[t - 1] - spec.fund_charge;  // 1 + R_t
        tr.fund[t] = std::max((tr.fund[t - 1] - tr.income[t - 1]) * growth, 0.0);
        tr.base[t] = ratchet_base(spec, t, tr.base[t - 1], tr.fund[t]);
        tr.income[t] = net * tr.base[t];
        tr.shortfall[t] = std::max(tr.income[t] - tr.fund[t], 0.0);
    }
    return tr;
}

double liability_sample(const CashflowTrace& trace, std::span<const double> discount, const SurvivalCurve& surv) {
    const std::size_t horizon = trace.fund.size() - 1;
    double total = 0.0;
    for (std::size_t t = 1; t <= horizon; ++t) total += discount[t] * surv.p[t] * trace.shortfall[t];
    return total;
}

CashflowSensitivities pathwise_cashflow_derivatives(const ProductSpec& spec, const CashflowTrace& tr,
                                                    std::span<const double> s, double issue_level) {
    const int horizon = spec.term;
    const double units = spec.premium / issue_level;
    const double cap = spec.ratchet_cap;
    const double net = spec.net_income_rate();

    CashflowSensitivities d;
    d.fund.resize(horizon + 1);
    d.base.resize(horizon + 1);
    d.income.resize(horizon + 1);
    d.fund[0] = units;
    d.base[0] = spec.guarantee_follows_equity ? units : 0.0;
    d.income[0] = 0.0;

    for (int t = 1; t <= horizon; ++t) {
        const double growth = s[t] / s[t - 1] - spec.fund_charge;
        const double carried = (d.fund[t - 1] - d.income[t - 1]) * growth;
        if (spec.floor_rule == FundFloorRule::literal_max) {
            d.fund[t] = std::max(carried, 0.0);
        } else {
            d.fund[t] = (tr.fund[t - 1] - tr.income[t - 1]) * growth > 0.0 ? carried : 0.0;
        }

        const double f = tr.fund[t];
        const double g_prev = tr.base[t - 1];
        if (t <= spec.ratchet_years && f >= g_prev) {
            d.base[t] = f <= cap * g_prev ? d.fund[t] : cap * d.base[t - 1];
        } else {
            d.base[t] = d.base[t - 1];
        }
        d.income[t] = net * d.base[t];
    }
    return d;
}

double pathwise_liability_delta(const CashflowTrace& tr, const CashflowSensitivities& d,
                                std::span<const double> discount, const SurvivalCurve& surv) {
    const std::size_t horizon = tr.fund.size() - 1;
    double total = 0.0;
    for (std::size_t t = 1; t <= horizon; ++t) {
        if (tr.income[t] > tr.fund[t]) total += discount[t] * surv.p[t] * (d.income[t] - d.fund[t]);
    }
    return total;
}

}  // namespace vag
