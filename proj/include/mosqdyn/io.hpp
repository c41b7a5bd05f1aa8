#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mosqdyn/analysis.hpp"
#include "mosqdyn/dynamics.hpp"
#include "mosqdyn/params.hpp"
#include "mosqdyn/simplex.hpp"
#include "mosqdyn/spectral.hpp"

namespace mosqdyn {

/// Shortest representation that round-trips the exact double, 17
/// significant digits at most.  All CSV output goes through this so files
/// are byte-identical across runs and platforms.
std::string format_double(double v);

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const State2& s);
void from_json(const nlohmann::json& j, State2& s);
void to_json(nlohmann::json& j, const RegimeThresholds& t);
void to_json(nlohmann::json& j, const FixedPointReport& r);
void to_json(nlohmann::json& j, const TCoefficients& c);
void to_json(nlohmann::json& j, const MonotonicityProfile& m);
void to_json(nlohmann::json& j, const Period2Certificate& c);
void to_json(nlohmann::json& j, const CardanoCrossCheck& c);
void to_json(nlohmann::json& j, const ConvergenceReport& r);
void to_json(nlohmann::json& j, const SweepRow& r);
void to_json(nlohmann::json& j, const Trajectory& t);

/// Envelope wrapped around every successful CLI invocation (schema
/// version 1): { schema_version, command, params_echo, payload }.
nlohmann::json make_envelope(const std::string& command,
                             const ModelParams& params,
                             nlohmann::json payload);

/// CSV writers.  Fixed column order, '\n' line endings, doubles via
/// format_double.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

} // namespace mosqdyn
