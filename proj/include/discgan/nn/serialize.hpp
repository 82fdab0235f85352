#pragma once

#include "json.hpp"

#include "discgan/nn/adam.hpp"
#include "discgan/nn/network.hpp"

namespace discgan::nn {

inline constexpr int kNetworkFormatVersion = 1;

/// Checkpoint record: layer chain plus flat row-major parameter arrays.
/// Doubles are written in shortest round-trip form, so
/// network_from_json(to_json(n)) reproduces every parameter bit-for-bit.
nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LayerSpec& spec);
LayerSpec layer_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdamState& state);
AdamState adam_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace discgan::nn
