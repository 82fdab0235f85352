#include "discgan/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "discgan/errors.hpp"

namespace discgan::nn {

namespace {

double probe_loss(const Network& net, const Matrix& batch, const Matrix& target, std::uint64_t seed,
                  ForwardCache* cache) {
  Rng rng(seed);
  ForwardResult r = forward(net, batch, Mode::train, &rng);
  const double loss = 0.5 * (r.output - target).squaredNorm() / static_cast<double>(batch.rows());
  if (cache != nullptr) *cache = std::move(r.cache);
  return loss;
}

}  // namespace

double grad_check(const Network& net, const Matrix& batch, const GradCheckOptions& options) {
  if (net.trainable_count() == 0) throw ArgumentError("grad_check: network has no trainable parameters");

  Rng target_rng(mix_seed(options.seed, 0x7a7));
  Matrix target(batch.rows(), net.output_width());
  for (Eigen::Index r = 0; r < target.rows(); ++r) {
    for (Eigen::Index c = 0; c < target.cols(); ++c) target(r, c) = target_rng.uniform();
  }
  const std::uint64_t mask_seed = mix_seed(options.seed, 0xd0);

  ForwardCache cache;
  probe_loss(net, batch, target, mask_seed, &cache);
  Matrix output = cache.layers.empty() ? batch : cache.layers.back().output;
  Matrix dout = (output - target) / static_cast<double>(batch.rows());
  const GradSet analytic = backward(net, cache, dout);

  Network probe = net;
  double worst = 0.0;
  for (std::size_t t = 0; t < probe.params().trainable.size(); ++t) {
    Matrix& tensor = probe.params().trainable[t];
    for (Eigen::Index k = 0; k < tensor.size(); ++k) {
      double& p = tensor.data()[k];
      const double saved = p;
      p = saved + options.eps;
      const double up = probe_loss(probe, batch, target, mask_seed, nullptr);
      p = saved - options.eps;
      const double down = probe_loss(probe, batch, target, mask_seed, nullptr);
      p = saved;
      const double numeric = (up - down) / (2.0 * options.eps);
      const double a = analytic.tensors[t].data()[k];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), options.floor});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace discgan::nn
