#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "simplexflow/divergence.hpp"
#include "simplexflow/experiment.hpp"
#include "simplexflow/solver.hpp"
#include "simplexflow/trainer.hpp"

namespace simplexflow {

// JSON documents mirroring the config structs. Missing keys keep defaults;
// unknown tags or ill-typed values raise ConfigError. alpha may be the string
// "inf", which selects deterministic interpolation.
InterpolationConfig interpolation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InterpolationConfig& cfg);

FlowModelSpec model_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FlowModelSpec& spec);

AdamConfig adam_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AdamConfig& cfg);

TrainConfig train_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainConfig& cfg);

SolverConfig solver_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolverConfig& cfg);

DivergenceConfig divergence_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DivergenceConfig& cfg);

ExperimentSpec experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentSpec& spec);

nlohmann::json read_json_file(const std::filesystem::path& path);

// FNV-1a 64 over the compact dump; stable across runs and platforms.
std::uint64_t config_hash(const nlohmann::json& j);

}  // namespace simplexflow
