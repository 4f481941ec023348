// gaborjitter: frame bounds, jitter-stability certificates, numerical
// verification, and hold-reconstruction experiments from one command line.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gabor/errors.hpp"
#include "gabor/json_io.hpp"
#include "gabor/kernels.hpp"
#include "gabor/poh.hpp"

namespace {

using gabor::json;

constexpr int kExitPass = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GABORJITTER_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw gabor::usage_error("GABORJITTER_SEED is not a valid integer");
        }
    }
    return 1;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void emit(const std::string& command, const json& config, const json& result,
          const std::string& output_path) {
    json envelope;
    envelope["command"] = command;
    // the only nondeterministic field in any output
    envelope["timestamp_utc"] = timestamp_utc();
    envelope["config"] = config;
    envelope["result"] = result;
    const std::string text = envelope.dump(2) + "\n";
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path);
        if (!out) throw gabor::io_error("cannot write output file: " + output_path);
        out << text;
    }
}

gabor::JitterProfile parse_jitter(const std::string& rows_arg, double total_L, double ell,
                                  const std::string& profile_path) {
    gabor::JitterProfile j;
    if (!profile_path.empty()) {
        std::ifstream in(profile_path);
        if (!in) throw gabor::io_error("cannot open jitter profile: " + profile_path);
        json pj;
        in >> pj;
        j = gabor::jitter_profile_from_json(pj);
    }
    if (total_L > 0.0) j = gabor::JitterProfile::from_total(total_L);
    if (!rows_arg.empty()) {
        std::stringstream ss(rows_arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw gabor::usage_error("--rows expects n:L pairs, got '" + item + "'");
            j.set_row(std::stol(item.substr(0, colon)),
                      std::stod(item.substr(colon + 1)));
        }
    }
    if (ell > 0.0) j.freq_sup = ell;
    return j;
}

std::vector<gabor::TensorDim> parse_dims(const std::vector<std::string>& dims_arg) {
    std::vector<gabor::TensorDim> dims;
    for (const auto& spec : dims_arg) {
        gabor::TensorDim d;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw gabor::usage_error("--dims expects key=value entries, got '" + item +
                                         "'");
            const std::string key = item.substr(0, eq);
            const double val = std::stod(item.substr(eq + 1));
            if (key == "a")
                d.lat.a = val;
            else if (key == "b")
                d.lat.b = val;
            else if (key == "L")
                d.total_jitter = val;
            else
                throw gabor::usage_error("--dims keys are a, b, L; got '" + key + "'");
        }
        dims.push_back(d);
    }
    return dims;
}

json load_certificate_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gabor::io_error("cannot open certificate file: " + path);
    json j;
    in >> j;
    if (j.contains("result") && j.contains("command")) return j.at("result");
    return j;
}

// ---------------------------------------------------------------------------

int run_bounds(int order, double a, double b, const std::string& window,
               int grid_per_unit, const std::string& output) {
    const gabor::LatticeParams lat{a, b};
    json config{{"p", order}, {"a", a}, {"b", b}, {"window", window},
                {"grid_per_unit", grid_per_unit}};
    json result;
    if (window == "bspline") {
        const auto certified = gabor::translate_overlap_bounds(order, lat);
        result["certified"] = gabor::to_json(certified);
        if (std::abs(a - 1.0) <= 1e-12 && std::abs(b - 1.0) <= 1e-12)
            result["exact"] = gabor::to_json(gabor::krein_favard_exact(order));
        const gabor::BSplineWindow w(order);
        const auto [lo, hi] = gabor::numeric_periodization_extrema(w, a, grid_per_unit);
        result["numeric"] = {{"lower", lo / b},
                             {"upper", hi / b},
                             {"kind", to_string(gabor::BoundsKind::numerical_estimate)}};
        result["check"] = gabor::to_json(
            gabor::check_necessary_condition(w, lat, certified, grid_per_unit));
    } else if (window == "cos") {
        const auto cw = gabor::cosine_window(order, a);
        const auto bounds = gabor::sobolev_bounds(cw, lat);
        result["sobolev"] = gabor::to_json(bounds);
        const auto [lo, hi] = gabor::numeric_periodization_extrema(cw, a, grid_per_unit);
        result["numeric"] = {{"lower", lo / b},
                             {"upper", hi / b},
                             {"kind", to_string(gabor::BoundsKind::numerical_estimate)}};
        result["check"] = gabor::to_json(
            gabor::check_necessary_condition(cw, lat, bounds, grid_per_unit));
    } else {
        throw gabor::usage_error("--window must be bspline or cos");
    }
    emit("bounds", config, result, output);
    const bool ok = result.at("check").at("ok").get<bool>();
    return ok ? kExitPass : kExitFalsified;
}

int run_certify(const std::string& model, int order, double a, double b,
                const gabor::JitterProfile& jit, const std::vector<std::string>& dims_arg,
                const std::string& window_spec, const std::string& output) {
    const gabor::LatticeParams lat{a, b};
    gabor::Certificate cert;
    if (model == "rect") {
        cert = gabor::certify_rect(lat, jit);
    } else if (model == "bspline") {
        cert = gabor::certify_bspline(order, lat, jit);
    } else if (model == "combined") {
        cert = gabor::certify_combined(order, lat, jit);
    } else if (model == "sinc") {
        cert = gabor::certify_sinc(order, lat, jit);
    } else if (model == "sobolev") {
        // --p is the window support here; --window picks the source
        gabor::SobolevWindow w;
        if (window_spec == "cos") {
            w = gabor::cosine_window(order, a);
            cert = gabor::certify_sobolev(w, lat, jit);
            cert.window_desc = "cos p=" + std::to_string(order);
        } else if (window_spec.rfind("csv:", 0) == 0) {
            const std::string path = window_spec.substr(4);
            const auto grid = gabor::read_signal_csv(path);
            w = gabor::sobolev_from_samples(grid.t0, grid.dt, grid.samples, a);
            cert = gabor::certify_sobolev(w, lat, jit);
            cert.window_desc = "table " + path;
        } else {
            throw gabor::usage_error("--window must be cos or csv:<path>");
        }
        cert.order = order;
    } else if (model == "tensor") {
        cert = gabor::certify_tensor(parse_dims(dims_arg));
    } else {
        throw gabor::usage_error("unknown certificate model: " + model);
    }
    json config{{"model", model}, {"p", order}, {"a", a}, {"b", b},
                {"jitter", gabor::to_json(jit)}};
    if (!dims_arg.empty()) config["dims"] = dims_arg;
    if (model == "sobolev") config["window"] = window_spec;
    emit("certify", config, gabor::to_json(cert), output);
    return cert.satisfied ? kExitPass : kExitFalsified;
}

int run_verify(const std::string& cert_path, int trials, long rows_max, long shifts_max,
               double tol, int grid_per_unit, std::uint64_t seed, int threads,
               const std::string& output) {
    if (trials < 1) throw gabor::usage_error("--trials must be at least 1");
    const gabor::Certificate cert =
        gabor::certificate_from_json(load_certificate_json(cert_path));
    if (cert.model != "rect" && cert.model != "bspline" && cert.model != "combined" &&
        cert.model != "sinc" && cert.model != "tensor")
        throw gabor::usage_error("verification covers 1-D B-spline families (rect, "
                                 "bspline, combined, sinc) and 1-D tensor certificates");
    if (cert.model == "tensor" && cert.dims.size() > 1)
        throw gabor::usage_error("only d = 1 tensor certificates can be verified "
                                 "numerically; higher dimensions factor into 1-D checks");
    const int order = cert.order > 0 ? cert.order : 1;
    const auto fam = gabor::realize_family(order, cert.lat, cert.jitter, rows_max,
                                           shifts_max, seed);
    gabor::VerifyOptions opt;
    opt.tol = tol;
    opt.subfamilies = trials;
    opt.test_signals = trials;
    opt.grid_per_unit = grid_per_unit;
    opt.seed = seed;
    opt.threads = threads;
    const auto rep = gabor::verify_certificate(cert, fam.atoms, opt);
    json config{{"certificate", cert_path}, {"trials", trials},
                {"rows_max", rows_max},     {"shifts_max", shifts_max},
                {"tol", tol},               {"grid_per_unit", grid_per_unit},
                {"seed", seed},             {"threads", threads},
                {"realized_total_L", fam.realized_total}};
    emit("verify", config, gabor::to_json(rep), output);
    return rep.pass ? kExitPass : kExitFalsified;
}

int run_simulate(const gabor::ExperimentConfig& cfg, const std::string& csv_path,
                 const std::string& out_prefix, const std::string& output) {
    std::optional<gabor::GridInterpolant> interp;
    std::function<double(double)> custom;
    gabor::ExperimentConfig cfg2 = cfg;
    if (!csv_path.empty()) {
        interp.emplace(gabor::read_signal_csv(csv_path));
        custom = [&interp](double t) { return (*interp)(t); };
        cfg2.signal = "csv:" + csv_path;
    }
    const auto rep = gabor::reconstruction_experiment(cfg2, custom ? &custom : nullptr);
    json result = gabor::to_json(rep);
    const json config = result.at("config");
    result.erase("config"); // lives in the envelope
    if (!out_prefix.empty()) {
        gabor::write_signal_csv(rep.reference, out_prefix + "_reference.csv");
        gabor::write_signal_csv(rep.hold, out_prefix + "_hold.csv");
        result["files"] = {{"reference", out_prefix + "_reference.csv"},
                           {"hold", out_prefix + "_hold.csv"}};
        if (rep.frame_branch_ran) {
            gabor::write_signal_csv(rep.frame_signal, out_prefix + "_frame.csv");
            result["files"]["frame"] = out_prefix + "_frame.csv";
        }
    }
    emit("simulate", config, result, output);
    return kExitPass;
}

int run_budget(int order, double a, double b, const std::string& model_str,
               const std::string& target_str, const std::string& output) {
    const auto model = gabor::jitter_model_from_string(model_str);
    gabor::BudgetTarget target;
    if (target_str == "frame")
        target = gabor::BudgetTarget::frame;
    else if (target_str == "riesz")
        target = gabor::BudgetTarget::riesz;
    else
        throw gabor::usage_error("--target must be frame or riesz");
    const double budget = gabor::jitter_budget(order, 1.0, {a, b}, target, model);
    json config{{"p", order}, {"a", a}, {"b", b}, {"model", to_string(model)},
                {"target", target_str}};
    json result{{"budget", budget}, {"model", to_string(model)}};
    if (budget == 0.0)
        result["note"] = "no positive jitter budget is certifiable for these parameters";
    emit("budget", config, result, output);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gabor-frame bounds, jitter-stability certificates, and "
                 "hold-reconstruction experiments"};
    app.require_subcommand(1);
    app.fallthrough(); // --output etc. may follow the subcommand

    std::string output;
    int threads = 1;
    std::string kernels_backend = "auto";
    app.add_option("--output", output, "write the JSON report here instead of stdout");
    app.add_option("--threads", threads, "worker cap for Gram assembly");
    app.add_option("--kernels", kernels_backend, "kernel backend: auto|scalar|avx2");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "frame bounds of the unperturbed system");
    int b_p = 1;
    double b_a = 1.0, b_b = 1.0;
    std::string b_window = "bspline";
    int b_grid = 2048;
    bounds->add_option("--p", b_p, "spline order (or cos-window support)")->required();
    bounds->add_option("--a", b_a, "time step")->required();
    bounds->add_option("--b", b_b, "frequency step")->required();
    bounds->add_option("--window", b_window, "bspline|cos");
    bounds->add_option("--grid", b_grid, "scan resolution per unit");

    // certify
    auto* certify = app.add_subcommand("certify", "stability certificate for a model");
    std::string c_model;
    int c_p = 1;
    double c_a = 1.0, c_b = 1.0, c_L = 0.0, c_ell = 0.0;
    std::string c_rows, c_profile, c_window = "cos";
    std::vector<std::string> c_dims;
    certify->add_option("model", c_model, "rect|bspline|combined|sinc|sobolev|tensor")
        ->required();
    certify->add_option("--p", c_p, "spline order (or sobolev window support)");
    certify->add_option("--a", c_a, "time step");
    certify->add_option("--b", c_b, "frequency step");
    certify->add_option("--L", c_L, "total time-jitter budget (single row)");
    certify->add_option("--rows", c_rows, "per-row budgets n:L,n:L,...");
    certify->add_option("--ell", c_ell, "frequency-jitter sup (< 1/4)");
    certify->add_option("--profile", c_profile, "jitter profile JSON file");
    certify->add_option("--dims", c_dims, "tensor dims, each a=..,b=..,L=..");
    certify->add_option("--window", c_window, "sobolev window: cos | csv:<path>");

    // verify
    auto* verify = app.add_subcommand("verify", "falsify-or-confirm a certificate");
    std::string v_cert;
    int v_trials = 4;
    long v_rows = 8, v_shifts = 16;
    double v_tol = 1e-6;
    int v_grid = 64;
    std::uint64_t v_seed = 0;
    bool v_seed_set = false;
    verify->add_option("--cert", v_cert, "certificate JSON (file or certify output)")
        ->required();
    verify->add_option("--trials", v_trials, "sampled subfamilies / test signals");
    verify->add_option("--rows", v_rows, "frequency rows |n| <= rows");
    verify->add_option("--shifts", v_shifts, "time shifts |k| <= shifts");
    verify->add_option("--tol", v_tol, "containment tolerance");
    verify->add_option("--grid", v_grid, "samples per unit time");
    verify->add_option("--seed", v_seed, "realization seed")
        ->each([&](const std::string&) { v_seed_set = true; });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "hold + frame reconstruction run");
    gabor::ExperimentConfig s_cfg;
    std::string s_csv, s_prefix, s_model = "single-row";
    std::uint64_t s_seed = 0;
    bool s_seed_set = false;
    simulate->add_option("--signal", s_cfg.signal,
                         "builtin: staircase|ramp|gauss|coschirp|chirp");
    simulate->add_option("--csv", s_csv, "input signal CSV (t,value)");
    simulate->add_option("--p", s_cfg.order, "hold order")->required();
    simulate->add_option("--T", s_cfg.T, "nominal sampling period");
    simulate->add_option("--eps", s_cfg.eps, "jitter bound");
    simulate->add_option("--n-lo", s_cfg.n_lo, "first sample index");
    simulate->add_option("--n-hi", s_cfg.n_hi, "last sample index");
    simulate->add_option("--rows", s_cfg.rows_max, "frame-branch frequency rows");
    simulate->add_option("--grid", s_cfg.grid_per_unit, "output samples per period");
    simulate->add_option("--iters", s_cfg.iters, "frame-algorithm iterations");
    simulate->add_option("--model", s_model, "jitter accounting: single-row|total-L");
    simulate->add_flag("--worst-case", s_cfg.worst_case_jitter,
                       "fixed +-eps jitter instead of uniform draws");
    simulate->add_option("--seed", s_seed, "realization seed")
        ->each([&](const std::string&) { s_seed_set = true; });
    simulate->add_option("--out-prefix", s_prefix, "write reconstruction CSVs here");

    // budget
    auto* budget = app.add_subcommand("budget", "supremal certified jitter");
    int g_p = 1;
    double g_a = 1.0, g_b = 1.0;
    std::string g_model = "single-row", g_target = "frame";
    budget->add_option("--p", g_p, "spline order")->required();
    budget->add_option("--a", g_a, "time step")->required();
    budget->add_option("--b", g_b, "frequency step")->required();
    budget->add_option("--model", g_model, "single-row|total-L");
    budget->add_option("--target", g_target, "frame|riesz");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        gabor::kernels::set_backend(kernels_backend);
        if (bounds->parsed()) return run_bounds(b_p, b_a, b_b, b_window, b_grid, output);
        if (certify->parsed()) {
            const auto jit = parse_jitter(c_rows, c_L, c_ell, c_profile);
            return run_certify(c_model, c_p, c_a, c_b, jit, c_dims, c_window, output);
        }
        if (verify->parsed())
            return run_verify(v_cert, v_trials, v_rows, v_shifts, v_tol, v_grid,
                              v_seed_set ? v_seed : default_seed(), threads, output);
        if (simulate->parsed()) {
            s_cfg.seed = s_seed_set ? s_seed : default_seed();
            s_cfg.model = gabor::jitter_model_from_string(s_model);
            return run_simulate(s_cfg, s_csv, s_prefix, output);
        }
        if (budget->parsed()) return run_budget(g_p, g_a, g_b, g_model, g_target, output);
        throw gabor::usage_error("no subcommand given");
    } catch (const gabor::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const gabor::io_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitNoInput;
    } catch (const gabor::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const gabor::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}
