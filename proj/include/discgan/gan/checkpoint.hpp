#pragma once

#include <filesystem>

#include "json.hpp"

#include "discgan/gan/model.hpp"

namespace discgan::gan {

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to resume training or generate: config, schema,
/// transforms, both networks with their Adam states, the condition
/// marginal, the step counter and the model rng state.
nlohmann::json checkpoint_to_json(const GanModel& model);
GanModel checkpoint_from_json(const nlohmann::json& j);

/// Writes through a temporary file and renames it into place, so a crash
/// never leaves a truncated checkpoint behind.
void save_checkpoint(const GanModel& model, const std::filesystem::path& path);
GanModel load_checkpoint(const std::filesystem::path& path);

}  // namespace discgan::gan
