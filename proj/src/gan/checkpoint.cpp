#include "discgan/gan/checkpoint.hpp"

#include <fstream>

#include "discgan/errors.hpp"
#include "discgan/nn/serialize.hpp"

namespace discgan::gan {

nlohmann::json checkpoint_to_json(const GanModel& model) {
  nlohmann::json cond = nullptr;
  if (model.condition) {
    cond = {{"column", model.condition->column},
            {"vocabulary", model.condition->vocabulary},
            {"marginal", model.condition->marginal}};
  }
  return {{"version", kCheckpointVersion},
          {"config", model.config.to_json()},
          {"schema", model.schema.to_json()},
          {"transforms", model.transforms.to_json()},
          {"condition", cond},
          {"generator", nn::to_json(model.generator)},
          {"discriminator", nn::to_json(model.discriminator)},
          {"generator_adam", nn::to_json(model.generator_adam)},
          {"discriminator_adam", nn::to_json(model.discriminator_adam)},
          {"step", model.step},
          {"rng", model.rng.state()}};
}

GanModel checkpoint_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw StateError("unsupported checkpoint version " + std::to_string(version));
    }
    GanModel m;
    m.config = GanConfig::from_json(j.at("config"));
    m.schema = data::TableSchema::from_json(j.at("schema"));
    m.transforms = data::TransformSet::from_json(j.at("transforms"));
    const auto& cond = j.at("condition");
    if (!cond.is_null()) {
      m.condition = ConditionInfo{cond.at("column").get<std::string>(),
                                  cond.at("vocabulary").get<std::vector<std::string>>(),
                                  cond.at("marginal").get<std::vector<double>>()};
    }
    m.feature_layout = m.condition ? m.transforms.layout().without(m.condition->column) : m.transforms.layout();
    m.generator = nn::network_from_json(j.at("generator"));
    m.discriminator = nn::network_from_json(j.at("discriminator"));
    m.generator_adam = nn::adam_from_json(j.at("generator_adam"));
    m.discriminator_adam = nn::adam_from_json(j.at("discriminator_adam"));
    m.step = j.at("step").get<std::int64_t>();
    m.rng.set_state(j.at("rng").get<std::string>());
    if (m.generator.output_width() != m.feature_width() ||
        m.generator.input_width() != m.config.noise_dim + m.condition_width() ||
        m.discriminator.input_width() != m.feature_width() + m.condition_width()) {
      throw StateError("checkpoint networks do not match its schema and config");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw StateError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const GanModel& model, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << checkpoint_to_json(model).dump() << '\n';
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

GanModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StateError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace discgan::gan
