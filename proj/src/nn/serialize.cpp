#include "discgan/nn/serialize.hpp"

#include <string>

#include "discgan/errors.hpp"

namespace discgan::nn {

using nlohmann::json;

json to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index k = 0; k < m.size(); ++k) data.push_back(m.data()[k]);
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw StateError("checkpoint tensor has inconsistent shape");
  }
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = data[static_cast<std::size_t>(k)].get<double>();
  return m;
}

json to_json(const LayerSpec& spec) {
  json j{{"kind", std::string(to_string(spec.kind))}};
  switch (spec.kind) {
    case LayerKind::dense:
      j["width"] = spec.width;
      break;
    case LayerKind::leaky_relu:
      j["alpha"] = spec.alpha;
      break;
    case LayerKind::batch_norm:
      j["momentum"] = spec.momentum;
      j["epsilon"] = spec.epsilon;
      break;
    case LayerKind::dropout:
      j["rate"] = spec.rate;
      break;
    case LayerKind::block_activation: {
      json blocks = json::array();
      for (const auto& b : spec.blocks) {
        blocks.push_back({{"offset", b.offset},
                          {"width", b.width},
                          {"fn", b.fn == BlockFn::sigmoid ? "sigmoid" : "softmax"}});
      }
      j["blocks"] = std::move(blocks);
      break;
    }
    case LayerKind::sigmoid:
      break;
  }
  return j;
}

LayerSpec layer_from_json(const json& j) {
  const LayerKind kind = layer_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case LayerKind::dense:
      return LayerSpec::dense(j.at("width").get<int>());
    case LayerKind::leaky_relu:
      return LayerSpec::leaky_relu(j.at("alpha").get<double>());
    case LayerKind::sigmoid:
      return LayerSpec::sigmoid();
    case LayerKind::batch_norm:
      return LayerSpec::batch_norm(j.at("momentum").get<double>(), j.at("epsilon").get<double>());
    case LayerKind::dropout:
      return LayerSpec::dropout(j.at("rate").get<double>());
    case LayerKind::block_activation: {
      std::vector<OutputBlock> blocks;
      for (const auto& b : j.at("blocks")) {
        const auto fn = b.at("fn").get<std::string>();
        if (fn != "sigmoid" && fn != "softmax") throw StateError("unknown block function '" + fn + "'");
        blocks.push_back({b.at("offset").get<int>(), b.at("width").get<int>(),
                          fn == "sigmoid" ? BlockFn::sigmoid : BlockFn::softmax});
      }
      return LayerSpec::block_activation(std::move(blocks));
    }
  }
  throw StateError("unreachable layer kind");
}

json to_json(const Network& net) {
  json layers = json::array();
  for (const auto& l : net.layers()) layers.push_back(to_json(l));
  json trainable = json::array();
  for (const auto& t : net.params().trainable) trainable.push_back(to_json(t));
  json non_trainable = json::array();
  for (const auto& t : net.params().non_trainable) non_trainable.push_back(to_json(t));
  return json{{"version", kNetworkFormatVersion},
              {"input_width", net.input_width()},
              {"layers", std::move(layers)},
              {"trainable", std::move(trainable)},
              {"non_trainable", std::move(non_trainable)}};
}

Network network_from_json(const json& j) {
  const int version = j.at("version").get<int>();
  if (version != kNetworkFormatVersion) {
    throw StateError("unsupported network format version " + std::to_string(version));
  }
  std::vector<LayerSpec> layers;
  for (const auto& l : j.at("layers")) layers.push_back(layer_from_json(l));
  Network net(j.at("input_width").get<int>(), std::move(layers));
  ParamSet params;
  for (const auto& t : j.at("trainable")) params.trainable.push_back(matrix_from_json(t));
  for (const auto& t : j.at("non_trainable")) params.non_trainable.push_back(matrix_from_json(t));
  net.params() = std::move(params);
  net.check_params();
  return net;
}

json to_json(const AdamState& state) {
  json m = json::array();
  json v = json::array();
  for (const auto& t : state.m) m.push_back(to_json(t));
  for (const auto& t : state.v) v.push_back(to_json(t));
  return json{{"lr", state.config.lr},
              {"beta1", state.config.beta1},
              {"beta2", state.config.beta2},
              {"epsilon", state.config.epsilon},
              {"t", state.t},
              {"m", std::move(m)},
              {"v", std::move(v)}};
}

AdamState adam_from_json(const json& j) {
  AdamState s;
  s.config.lr = j.at("lr").get<double>();
  s.config.beta1 = j.at("beta1").get<double>();
  s.config.beta2 = j.at("beta2").get<double>();
  s.config.epsilon = j.at("epsilon").get<double>();
  s.t = j.at("t").get<std::int64_t>();
  for (const auto& t : j.at("m")) s.m.push_back(matrix_from_json(t));
  for (const auto& t : j.at("v")) s.v.push_back(matrix_from_json(t));
  return s;
}

}  // namespace discgan::nn
