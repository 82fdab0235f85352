#include "discgan/data/sampler.hpp"

#include "discgan/errors.hpp"

namespace discgan::data {

BatchSampler::BatchSampler(const EncodedMatrix& data, std::optional<std::string> balance_on) : data_(&data) {
  if (data.rows() == 0) throw ArgumentError("cannot sample from an empty matrix");
  if (!balance_on) return;
  const Block* block = data.layout.find(*balance_on);
  if (block == nullptr) throw ArgumentError("balance column '" + *balance_on + "' is not in the layout");
  if (block->kind != ColumnKind::discrete) {
    throw ArgumentError("balance column '" + *balance_on + "' is continuous; balancing needs a discrete column");
  }
  std::vector<std::vector<std::size_t>> by_category(static_cast<std::size_t>(block->width));
  for (Eigen::Index r = 0; r < data.values.rows(); ++r) {
    const auto seg = data.values.row(r).segment(block->offset, block->width);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < block->width; ++c) {
      if (seg(c) > seg(best)) best = c;
    }
    by_category[static_cast<std::size_t>(best)].push_back(static_cast<std::size_t>(r));
  }
  for (auto& g : by_category) {
    if (!g.empty()) groups_.push_back(std::move(g));
  }
}

std::vector<std::size_t> BatchSampler::sample_indices(std::size_t batch_size, Rng& rng) const {
  if (batch_size == 0) throw ArgumentError("batch_size must be at least 1");
  std::vector<std::size_t> out(batch_size);
  for (auto& idx : out) {
    if (groups_.empty()) {
      idx = rng.index(data_->rows());
    } else {
      const auto& g = groups_[rng.index(groups_.size())];
      idx = g[rng.index(g.size())];
    }
  }
  return out;
}

EncodedMatrix BatchSampler::sample(std::size_t batch_size, Rng& rng) const {
  return gather_rows(*data_, sample_indices(batch_size, rng));
}

EncodedMatrix gather_rows(const EncodedMatrix& m, const std::vector<std::size_t>& rows) {
  EncodedMatrix out;
  out.layout = m.layout;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), m.values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.values.row(static_cast<Eigen::Index>(i)) = m.values.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

EncodedMatrix sample_batch(const EncodedMatrix& m, std::size_t batch_size, Rng& rng,
                           const std::optional<std::string>& balance_on) {
  return BatchSampler(m, balance_on).sample(batch_size, rng);
}

}  // namespace discgan::data
