#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vagreeks/bs_kernel.hpp"
#include "vagreeks/errors.hpp"
#include "vagreeks/experiment.hpp"
#include "vagreeks/scenario.hpp"
#include "vagreeks/stats.hpp"
#include "vagreeks/va_product.hpp"

namespace py = pybind11;

namespace {

std::string as_setting(const py::handle& value) {
    if (py::isinstance<py::bool_>(value)) return value.cast<bool>() ? "true" : "false";
    if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
        std::string joined;
        for (const auto& item : value) {
            if (!joined.empty()) joined += ',';
            joined += py::str(item).cast<std::string>();
        }
        return joined;
    }
    return py::str(value).cast<std::string>();
}

py::dict row_to_dict(const vag::ResultRow& r) {
    py::dict d;
    d["case"] = r.case_id;
    d["estimator"] = std::string(vag::to_string(r.estimate.estimator));
    d["order"] = std::string(vag::to_string(r.estimate.order));
    d["value"] = r.estimate.value;
    d["std_err"] = r.estimate.std_err;
    d["n_outer"] = r.estimate.n_outer;
    d["n_inner"] = r.estimate.n_inner;
    d["seed"] = r.estimate.seed;
    d["runtime_s"] = r.estimate.runtime_s;
    return d;
}

vag::RunConfig config_from_kwargs(const py::kwargs& kwargs) {
    vag::RunConfig config;
    for (const auto& [key, value] : kwargs) {
        vag::apply_setting(config, key.cast<std::string>(), as_setting(value));
    }
    if (!config.case_id && !config.params) config.case_id = 'A';
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monte Carlo Greeks for a GMWB variable annuity under Heston-CIR dynamics";

    py::register_exception<vag::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<vag::NonPositiveDefinite>(m, "NonPositiveDefinite", PyExc_ValueError);
    py::register_exception<vag::DegenerateVolatility>(m, "DegenerateVolatility", PyExc_ValueError);
    py::register_exception<vag::UnsupportedPayoff>(m, "UnsupportedPayoff", PyExc_ValueError);
    py::register_exception<vag::InsufficientSamples>(m, "InsufficientSamples", PyExc_ValueError);

    py::class_<vag::ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("kappa_v", &vag::ModelParams::kappa_v)
        .def_readwrite("theta_v", &vag::ModelParams::theta_v)
        .def_readwrite("sigma_v", &vag::ModelParams::sigma_v)
        .def_readwrite("v0", &vag::ModelParams::v0)
        .def_readwrite("kappa_r", &vag::ModelParams::kappa_r)
        .def_readwrite("theta_r", &vag::ModelParams::theta_r)
        .def_readwrite("sigma_r", &vag::ModelParams::sigma_r)
        .def_readwrite("r0", &vag::ModelParams::r0)
        .def_readwrite("rho_sv", &vag::ModelParams::rho_sv)
        .def_readwrite("rho_sr", &vag::ModelParams::rho_sr)
        .def_readwrite("rho_vr", &vag::ModelParams::rho_vr)
        .def("validate", &vag::ModelParams::validate);

    m.def("builtin_case", [](const std::string& id) {
        if (id.size() != 1) throw vag::ConfigError("unknown case '" + id + "'");
        return vag::builtin_case(id[0]);
    }, py::arg("case_id"));

    m.def("cholesky_factor", [](double rho_sv, double rho_sr, double rho_vr) {
        return vag::cholesky_factor(rho_sv, rho_sr, rho_vr).a;
    }, py::arg("rho_sv"), py::arg("rho_sr"), py::arg("rho_vr"),
       "lower-triangular factor as nested lists, rows ordered (V, r, S)");

    auto european = [](double s0, double strike, double rate, double vol, double maturity) {
        vag::EuropeanSpec s;
        s.s0 = s0;
        s.strike = strike;
        s.rate = rate;
        s.vol = vol;
        s.maturity = maturity;
        return s;
    };
    auto bs_args = [] {
        return std::make_tuple(py::arg("s0") = 100.0, py::arg("strike") = 100.0, py::arg("rate") = 0.05,
                               py::arg("vol") = 0.2, py::arg("maturity") = 1.0);
    };
    auto [a0, a1, a2, a3, a4] = bs_args();
    m.def("bs_call_price", [=](double s, double k, double r, double v, double t) {
        return vag::bs_call_price(european(s, k, r, v, t));
    }, a0, a1, a2, a3, a4);
    m.def("bs_call_delta", [=](double s, double k, double r, double v, double t) {
        return vag::bs_call_delta(european(s, k, r, v, t));
    }, a0, a1, a2, a3, a4);
    m.def("bs_call_gamma", [=](double s, double k, double r, double v, double t) {
        return vag::bs_call_gamma(european(s, k, r, v, t));
    }, a0, a1, a2, a3, a4);
    m.def("bs_digital_delta", [=](double s, double k, double r, double v, double t) {
        auto spec = european(s, k, r, v, t);
        spec.payoff = vag::Payoff::digital;
        return vag::bs_digital_delta(spec);
    }, a0, a1, a2, a3, a4);
    m.def("lrm_delta_weight", &vag::lrm_delta_weight, py::arg("z"), py::arg("s0"), py::arg("vol"),
          py::arg("maturity"));
    m.def("lrm_gamma_weight", &vag::lrm_gamma_weight, py::arg("z"), py::arg("s0"), py::arg("vol"),
          py::arg("maturity"));

    m.def("survival_curve", [](int term, double lapse_rate) {
        vag::ProductSpec spec;
        spec.term = term;
        spec.lapse_rate = lapse_rate;
        return vag::survival_curve(spec).p;
    }, py::arg("term") = 30, py::arg("lapse_rate") = 0.04);

    m.def("mean_se", [](const std::vector<double>& xs) {
        const auto r = vag::mean_se(xs);
        return py::make_tuple(r.mean, r.std_err);
    }, py::arg("samples"));
    m.def("clustered_mean_se", [](const std::vector<double>& xs) {
        const auto r = vag::clustered_mean_se(xs);
        return py::make_tuple(r.mean, r.std_err);
    }, py::arg("cluster_means"));

    m.def("run_case", [](const py::kwargs& kwargs) {
        const vag::RunConfig config = config_from_kwargs(kwargs);
        std::vector<vag::ResultRow> rows;
        {
            py::gil_scoped_release release;
            rows = vag::run_case(config);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
    }, "Run one experiment. Keyword arguments use the config-file keys "
       "(case, estimators, paths, outer, inner, steps_per_year, bump, seed, threads, ...).");

    m.def("run_case_csv", [](const py::kwargs& kwargs) {
        const vag::RunConfig config = config_from_kwargs(kwargs);
        std::vector<vag::ResultRow> rows;
        {
            py::gil_scoped_release release;
            rows = vag::run_case(config);
        }
        std::ostringstream os;
        vag::write_csv(os, rows);
        return os.str();
    });

    m.def("validate", [](std::size_t samples, std::uint64_t seed, unsigned threads, bool corrupt_gamma_weight) {
        vag::ValidationOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        opt.threads = threads;
        opt.corrupt_gamma_weight = corrupt_gamma_weight;
        vag::ValidationReport report;
        {
            py::gil_scoped_release release;
            report = vag::validate(opt);
        }
        py::list checks;
        for (const auto& c : report.checks) {
            py::dict d;
            d["name"] = c.name;
            d["estimate"] = c.estimate;
            d["std_err"] = c.std_err;
            d["expected"] = c.expected;
            d["deviation_se"] = c.deviation_se;
            d["passed"] = c.passed;
            checks.append(d);
        }
        return py::make_tuple(report.passed(), checks);
    }, py::arg("samples") = 1000000, py::arg("seed") = 7, py::arg("threads") = 0,
       py::arg("corrupt_gamma_weight") = false);
}
