#include "discgan/gan/model.hpp"

#include "discgan/errors.hpp"

namespace discgan::gan {

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw DimensionError("hcat: row counts differ");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

nn::Network build_generator(const GanConfig& cfg, const data::Layout& layout, int cond_width, Rng& init_rng) {
  cfg.validate();
  if (layout.width < 1) throw ArgumentError("generator output width must be at least 1");
  if (cond_width < 0) throw ArgumentError("condition width must be non-negative");
  std::vector<nn::LayerSpec> layers;
  if (cfg.preset == Preset::discgan) {
    for (int i = 0; i < 3; ++i) {
      layers.push_back(nn::LayerSpec::dense(cfg.hidden_width));
      layers.push_back(nn::LayerSpec::leaky_relu(cfg.leaky_alpha));
      layers.push_back(nn::LayerSpec::batch_norm());
    }
    layers.push_back(nn::LayerSpec::leaky_relu(cfg.leaky_alpha));
    layers.push_back(nn::LayerSpec::dense(layout.width));
    std::vector<nn::OutputBlock> blocks;
    for (const auto& b : layout.blocks) {
      if (b.kind == data::ColumnKind::continuous) {
        blocks.push_back({b.offset, b.width, nn::BlockFn::sigmoid});
      } else {
        blocks.push_back({b.offset, b.width, nn::BlockFn::softmax});
      }
    }
    layers.push_back(nn::LayerSpec::block_activation(std::move(blocks)));
  } else {
    if (layout.width != 1) throw ArgumentError("gan1d/cgan2d generators produce exactly one channel");
    for (int i = 0; i < 2; ++i) {
      layers.push_back(nn::LayerSpec::dense(cfg.hidden_width));
      layers.push_back(nn::LayerSpec::leaky_relu(cfg.leaky_alpha));
    }
    layers.push_back(nn::LayerSpec::dense(1));
    layers.push_back(nn::LayerSpec::sigmoid());
  }
  return nn::Network(cfg.noise_dim + cond_width, std::move(layers), init_rng);
}

nn::Network build_discriminator(const GanConfig& cfg, int in_width, int cond_width, Rng& init_rng) {
  cfg.validate();
  if (in_width < 1) throw ArgumentError("discriminator input width must be at least 1");
  if (cond_width < 0) throw ArgumentError("condition width must be non-negative");
  std::vector<nn::LayerSpec> layers;
  for (int i = 0; i < 2; ++i) {
    layers.push_back(nn::LayerSpec::dense(cfg.hidden_width));
    layers.push_back(nn::LayerSpec::leaky_relu(cfg.leaky_alpha));
    layers.push_back(nn::LayerSpec::dropout(cfg.dropout));
  }
  layers.push_back(nn::LayerSpec::dense(1));
  layers.push_back(nn::LayerSpec::sigmoid());
  return nn::Network(in_width + cond_width, std::move(layers), init_rng);
}

void check_preset_schema(Preset preset, const data::TableSchema& schema) {
  const auto cond = schema.condition_column();
  std::size_t continuous = 0;
  std::size_t discrete_features = 0;
  for (const auto& c : schema.columns()) {
    if (c.role == data::ColumnRole::condition) continue;
    (c.kind == data::ColumnKind::continuous ? continuous : discrete_features) += 1;
  }
  const std::string name(to_string(preset));
  switch (preset) {
    case Preset::gan1d:
      if (cond || continuous != 1 || discrete_features != 0) {
        throw SchemaError(name + " needs exactly one continuous column and no condition");
      }
      break;
    case Preset::cgan2d:
      if (!cond || continuous != 1 || discrete_features != 0) {
        throw SchemaError(name + " needs exactly one continuous column and one condition column");
      }
      break;
    case Preset::discgan:
      if (continuous > 1) {
        throw SchemaError(name + " supports at most one continuous feature column; the schema has " +
                          std::to_string(continuous));
      }
      break;
  }
}

GanModel make_model(const GanConfig& cfg, const data::TableSchema& schema, const data::TransformSet& transforms,
                    const data::EncodedMatrix& data) {
  cfg.validate();
  check_preset_schema(cfg.preset, schema);
  if (!(data.layout == transforms.layout())) throw StateError("training data layout does not match the transforms");
  if (data.rows() == 0) throw ArgumentError("training data is empty");

  GanModel m;
  m.config = cfg;
  m.schema = schema;
  m.transforms = transforms;
  m.feature_layout = transforms.layout();
  if (const auto cond = schema.condition_column()) {
    const auto& block = transforms.layout().at(*cond);
    ConditionInfo info{*cond, transforms.at(*cond).vocabulary, {}};
    const RowVector counts = data.values.middleCols(block.offset, block.width).colwise().sum();
    for (Eigen::Index c = 0; c < counts.size(); ++c) {
      info.marginal.push_back(counts(c) / static_cast<double>(data.rows()));
    }
    m.feature_layout = transforms.layout().without(*cond);
    m.condition = std::move(info);
  }
  if (cfg.balance_on) {
    const auto* b = transforms.layout().find(*cfg.balance_on);
    if (b == nullptr || b->kind != data::ColumnKind::discrete) {
      throw ConfigError("balance_on: '" + *cfg.balance_on + "' is not a discrete schema column");
    }
  }

  Rng g_init(mix_seed(cfg.seed, 1));
  Rng d_init(mix_seed(cfg.seed, 2));
  m.generator = build_generator(cfg, m.feature_layout, m.condition_width(), g_init);
  m.discriminator = build_discriminator(cfg, m.feature_width(), m.condition_width(), d_init);
  m.generator_adam = nn::AdamState::for_params(m.generator.params(), cfg.generator_optimizer);
  m.discriminator_adam = nn::AdamState::for_params(m.discriminator.params(), cfg.discriminator_optimizer);
  m.rng = Rng(mix_seed(cfg.seed, 3));
  return m;
}

SplitRows split_condition(const GanModel& model, const data::EncodedMatrix& m) {
  if (!(m.layout == model.transforms.layout())) throw StateError("encoded layout does not match the model");
  SplitRows out;
  out.features.resize(m.values.rows(), model.feature_width());
  out.condition.resize(m.values.rows(), model.condition_width());
  for (const auto& b : m.layout.blocks) {
    const auto src = m.values.middleCols(b.offset, b.width);
    if (model.condition && b.column == model.condition->column) {
      out.condition = src;
    } else {
      out.features.middleCols(model.feature_layout.at(b.column).offset, b.width) = src;
    }
  }
  return out;
}

data::EncodedMatrix join_condition(const GanModel& model, const Matrix& features, const Matrix& condition) {
  if (features.cols() != model.feature_width() || condition.cols() != model.condition_width() ||
      (condition.cols() > 0 && condition.rows() != features.rows())) {
    throw DimensionError("join_condition: feature/condition widths do not match the model");
  }
  data::EncodedMatrix out;
  out.layout = model.transforms.layout();
  out.values.resize(features.rows(), out.layout.width);
  for (const auto& b : out.layout.blocks) {
    if (model.condition && b.column == model.condition->column) {
      out.values.middleCols(b.offset, b.width) = condition;
    } else {
      out.values.middleCols(b.offset, b.width) = features.middleCols(model.feature_layout.at(b.column).offset, b.width);
    }
  }
  return out;
}

}  // namespace discgan::gan
