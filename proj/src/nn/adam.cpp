#include "discgan/nn/adam.hpp"

#include <cmath>
#include <string>

#include "discgan/errors.hpp"

namespace discgan::nn {

AdamState AdamState::for_params(const ParamSet& params, AdamConfig config) {
  AdamState s;
  s.config = config;
  for (const auto& p : params.trainable) {
    s.m.push_back(Matrix::Zero(p.rows(), p.cols()));
    s.v.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
  return s;
}

void adam_step(ParamSet& params, const GradSet& grads, AdamState& state) {
  if (!grads.same_shape(params) || state.m.size() != params.trainable.size() ||
      state.v.size() != params.trainable.size()) {
    throw DimensionError("adam_step: gradient/state shapes do not match parameters");
  }
  if (state.t < 0) throw StateError("adam_step: negative step counter");
  for (std::size_t i = 0; i < grads.tensors.size(); ++i) {
    if (!grads.tensors[i].allFinite()) {
      throw NumericError("adam_step: non-finite gradient in tensor " + std::to_string(i) + " at step " +
                         std::to_string(state.t + 1));
    }
  }

  const auto& c = state.config;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < grads.tensors.size(); ++i) {
    const auto& g = grads.tensors[i].array();
    auto m = state.m[i].array();
    auto v = state.v[i].array();
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.square();
    params.trainable[i].array() -= c.lr * (m / correct1) / ((v / correct2).sqrt() + c.epsilon);
  }
}

}  // namespace discgan::nn
