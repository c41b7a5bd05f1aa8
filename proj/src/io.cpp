#include "mosqdyn/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace mosqdyn {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json complex_json(const Complex& c) {
    return {{"re", c.real()}, {"im", c.imag()}};
}

} // namespace

void to_json(nlohmann::json& j, const ModelParams& p) {
    j = {{"alpha", p.alpha}, {"beta", p.beta},          {"mu", p.mu},
         {"d0", p.d0},       {"d1", p.d1},              {"lemma1_valid", p.lemma1_valid}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.mu = j.at("mu").get<double>();
    p.d0 = j.at("d0").get<double>();
    p.d1 = j.at("d1").get<double>();
    p.lemma1_valid = j.at("lemma1_valid").get<bool>();
}

void to_json(nlohmann::json& j, const State2& s) {
    j = {{"x", s.x}, {"y", s.y}};
}

void from_json(const nlohmann::json& j, State2& s) {
    s.x = j.at("x").get<double>();
    s.y = j.at("y").get<double>();
}

void to_json(nlohmann::json& j, const RegimeThresholds& t) {
    j = {{"t1", t.t1}, {"t2", t.t2}};
}

void to_json(nlohmann::json& j, const FixedPointReport& r) {
    j = {{"location", r.location},
         {"eigenvalues",
          {complex_json(r.eigenvalues.first), complex_json(r.eigenvalues.second)}},
         {"moduli",
          {std::abs(r.eigenvalues.first), std::abs(r.eigenvalues.second)}},
         {"stability", to_string(r.stability)},
         {"thresholds", r.thresholds}};
}

void to_json(nlohmann::json& j, const TCoefficients& c) {
    j = {{"a", c.a}, {"b", c.b}, {"e", c.e}, {"f", c.f}, {"d", c.d}};
}

void to_json(nlohmann::json& j, const MonotonicityProfile& m) {
    j = {{"shape", to_string(m.shape)},
         {"case_tag", to_string(m.case_tag)},
         {"case_boundary", m.case_boundary},
         {"grid_decided", m.grid_decided}};
    if (m.x_min)
        j["x_min"] = *m.x_min;
    else
        j["x_min"] = nullptr;
}

void to_json(nlohmann::json& j, const Period2Certificate& c) {
    j = {{"A", c.A},
         {"B", c.B},
         {"C", c.C},
         {"max_quadratic_on_unit_interval", c.max_quadratic_on_unit_interval},
         {"conclusion", c.conclusion}};
}

void to_json(nlohmann::json& j, const CardanoCrossCheck& c) {
    j = {{"found", c.found},
         {"value", c.value},
         {"principal_value", c.principal_value},
         {"imag_residual", c.imag_residual},
         {"branch", c.branch}};
}

void to_json(nlohmann::json& j, const ConvergenceReport& r) {
    j = {{"params", r.params},
         {"start", r.start},
         {"verdict", to_string(r.verdict)},
         {"iterations_used", r.iterations_used},
         {"final_state", r.final_state},
         {"tol", r.tol}};
    j["bound_entry_index"] =
        r.bound_entry_index ? nlohmann::json(*r.bound_entry_index) : nullptr;
    j["monotone_tail_index"] =
        r.monotone_tail_index ? nlohmann::json(*r.monotone_tail_index) : nullptr;
}

void to_json(nlohmann::json& j, const SweepRow& r) {
    j = {{"alpha", r.alpha},
         {"beta", r.beta},
         {"mu", r.mu},
         {"d0", r.d0},
         {"regime", r.regime ? nlohmann::json(to_string(*r.regime)) : nullptr},
         {"verdict", to_string(r.verdict)},
         {"iterations", r.iterations}};
    j["empirical"] = r.empirical ? nlohmann::json(to_string(*r.empirical)) : nullptr;
    j["limit"] = r.limit ? nlohmann::json(*r.limit) : nullptr;
    j["limit_residual"] =
        r.limit_residual ? nlohmann::json(*r.limit_residual) : nullptr;
    j["error"] = r.error ? nlohmann::json(*r.error) : nullptr;
}

void to_json(nlohmann::json& j, const Trajectory& t) {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t k = 0; k < t.points.size(); ++k)
        pts.push_back({{"n", t.first_index + k},
                       {"x", t.points[k].x},
                       {"y", t.points[k].y}});
    j = {{"params", t.params}, {"points", std::move(pts)}};
    if (t.converged) {
        j["converged"] = true;
        j["limit"] = t.converged->limit;
        j["stop_tol"] = t.converged->tol;
    } else {
        j["converged"] = false;
    }
    j["monotone_tail_start"] =
        t.monotone_tail_start ? nlohmann::json(*t.monotone_tail_start) : nullptr;
}

nlohmann::json make_envelope(const std::string& command,
                             const ModelParams& params,
                             nlohmann::json payload) {
    return {{"schema_version", 1},
            {"command", command},
            {"params_echo", params},
            {"payload", std::move(payload)}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
    os << "n,x,y\n";
    for (std::size_t k = 0; k < t.points.size(); ++k)
        os << (t.first_index + k) << ',' << format_double(t.points[k].x) << ','
           << format_double(t.points[k].y) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "alpha,beta,mu,d0,regime,verdict,iterations\n";
    for (const auto& r : rows) {
        os << format_double(r.alpha) << ',' << format_double(r.beta) << ','
           << format_double(r.mu) << ',' << format_double(r.d0) << ','
           << (r.regime ? to_string(*r.regime) : "Invalid") << ','
           << to_string(r.verdict) << ',' << r.iterations << '\n';
    }
}

} // namespace mosqdyn
