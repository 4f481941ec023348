#include "gabor/json_io.hpp"

#include "gabor/errors.hpp"

namespace gabor {

namespace {

BoundsKind kind_from_string(const std::string& s) {
    if (s == "certified_lower_upper") return BoundsKind::certified_lower_upper;
    if (s == "exact") return BoundsKind::exact;
    if (s == "numerical_estimate") return BoundsKind::numerical_estimate;
    throw usage_error("unknown bounds kind: " + s);
}

} // namespace

json to_json(const FrameBounds& b) {
    return json{{"lower", b.lower}, {"upper", b.upper}, {"kind", to_string(b.kind)}};
}

FrameBounds bounds_from_json(const json& j) {
    FrameBounds b;
    b.lower = j.at("lower").get<double>();
    b.upper = j.at("upper").get<double>();
    b.kind = kind_from_string(j.at("kind").get<std::string>());
    return b;
}

json to_json(const JitterProfile& p) {
    json rows = json::object();
    for (const auto& [n, L] : p.rows()) rows[std::to_string(n)] = L;
    return json{{"rows", rows}, {"ell", p.freq_sup}, {"total", p.total()}};
}

JitterProfile jitter_profile_from_json(const json& j) {
    JitterProfile p;
    if (j.contains("rows"))
        for (const auto& [key, val] : j.at("rows").items())
            p.set_row(std::stol(key), val.get<double>());
    if (j.contains("ell")) p.freq_sup = j.at("ell").get<double>();
    if (j.contains("L")) p.set_row(0, j.at("L").get<double>()); // shorthand
    return p;
}

json to_json(const Certificate& c) {
    json j;
    j["model"] = c.model;
    j["base_source"] = c.base_source;
    j["condition"] = {{"lhs", c.condition_lhs}, {"rhs", c.condition_rhs},
                      {"satisfied", c.satisfied}};
    j["riesz"] = c.riesz;
    j["relative_factors"] =
        c.factors ? json{{"lower", c.factors->lower}, {"upper", c.factors->upper}}
                  : json(nullptr);
    j["absolute_bounds"] = c.absolute ? to_json(*c.absolute) : json(nullptr);
    json inputs;
    inputs["order"] = c.order;
    inputs["a"] = c.lat.a;
    inputs["b"] = c.lat.b;
    inputs["jitter"] = to_json(c.jitter);
    if (!c.dims.empty()) {
        json dims = json::array();
        for (const auto& d : c.dims)
            dims.push_back({{"a", d.lat.a}, {"b", d.lat.b}, {"L", d.total_jitter}});
        inputs["dims"] = dims;
    }
    if (!c.window_desc.empty()) inputs["window"] = c.window_desc;
    j["inputs"] = inputs;
    return j;
}

Certificate certificate_from_json(const json& j) {
    Certificate c;
    c.model = j.at("model").get<std::string>();
    c.base_source = j.value("base_source", std::string());
    const auto& cond = j.at("condition");
    c.condition_lhs = cond.at("lhs").get<double>();
    c.condition_rhs = cond.at("rhs").get<double>();
    c.satisfied = cond.at("satisfied").get<bool>();
    c.riesz = j.value("riesz", false);
    if (j.contains("relative_factors") && !j.at("relative_factors").is_null()) {
        const auto& f = j.at("relative_factors");
        c.factors = RelativeFactors{f.at("lower").get<double>(), f.at("upper").get<double>()};
    }
    if (j.contains("absolute_bounds") && !j.at("absolute_bounds").is_null())
        c.absolute = bounds_from_json(j.at("absolute_bounds"));
    const auto& in = j.at("inputs");
    c.order = in.value("order", 0);
    c.lat.a = in.value("a", 1.0);
    c.lat.b = in.value("b", 1.0);
    if (in.contains("jitter")) c.jitter = jitter_profile_from_json(in.at("jitter"));
    if (in.contains("dims"))
        for (const auto& d : in.at("dims"))
            c.dims.push_back(TensorDim{{d.at("a").get<double>(), d.at("b").get<double>()},
                                       d.at("L").get<double>()});
    c.window_desc = in.value("window", std::string());
    return c;
}

json to_json(const PeriodizationCheck& c) {
    return json{{"ok", c.ok},
                {"min_value", c.min_value},
                {"max_value", c.max_value},
                {"lower_margin", c.lower_margin},
                {"upper_margin", c.upper_margin},
                {"violations", c.violations}};
}

json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"size", c.size},
                          {"observed_min", c.observed_min},
                          {"observed_max", c.observed_max},
                          {"bound_lower", c.bound_lower},
                          {"bound_upper", c.bound_upper},
                          {"margin", c.margin}});
    json j{{"seed", r.seed}, {"tol", r.tol}, {"pass", r.pass}, {"checks", checks}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const ExperimentReport& r) {
    json cfg{{"signal", r.config.signal},
             {"order", r.config.order},
             {"T", r.config.T},
             {"eps", r.config.eps},
             {"n_lo", r.config.n_lo},
             {"n_hi", r.config.n_hi},
             {"rows_max", r.config.rows_max},
             {"grid_per_unit", r.config.grid_per_unit},
             {"iters", r.config.iters},
             {"seed", r.config.seed},
             {"model", to_string(r.config.model)},
             {"worst_case_jitter", r.config.worst_case_jitter}};
    json j;
    j["config"] = cfg;
    j["realized_sup"] = r.realized_sup;
    j["budget"] = r.budget;
    j["over_budget"] = r.over_budget;
    j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
    j["interior_window"] = {r.interior_lo, r.interior_hi};
    j["hold_rel_error"] = r.hold_rel_error;
    json frame;
    frame["ran"] = r.frame_branch_ran;
    frame["bounds_estimated"] = r.frame_bounds_estimated;
    frame["diverged"] = r.frame_diverged;
    if (r.frame_branch_ran) {
        frame["rel_error"] = r.frame_rel_error;
        frame["step_ratio_tail"] = r.frame_ratio_tail;
    }
    j["frame"] = frame;
    return j;
}

} // namespace gabor
