#pragma once

#include "macrofield/model.hpp"
#include "macrofield/multiworld.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace macrofield {

/// Model document keys: p_v0, p_rel, p_s, p_B, p_P, a0, b0, p_n, Y0, K0, t0.
/// Rates are a number, {"table": {"1950": v, ...}} or {"exponential_prel": {"p_rel0": .., "T_h": ..}}.
/// Unknown keys raise ValidationError.
ModelParams parse_model_params(std::string_view json_text);
std::string model_params_to_json(const ModelParams& params);

/// Model keys plus optional horizon, step, method and allow_negative.
struct SimulationConfig {
    ModelParams params;
    IntegrateOptions options;
};

SimulationConfig parse_simulation_config(std::string_view json_text);

/// {"economies": [{"name": .., model keys..}], "transfers": [{"from", "to", "kind", "rate",
/// "gdp_share"}], "exogenous": [{"economy", "kind", "rate"}], "retarded", "horizon", "step",
/// "method"}. Economies are referenced by index or name.
struct WorldConfig {
    WorldParams world;
    std::vector<std::string> names;
    int horizon = 140;
    double step = 0.25;
    Method method = Method::rk4;
};

WorldConfig parse_world_config(std::string_view json_text);

} // namespace macrofield
