#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "discgan/data/transforms.hpp"
#include "discgan/rng.hpp"

namespace discgan::data {

/// Draws row batches (with replacement) from an encoded matrix. With a
/// balance column, a category is drawn uniformly among the categories that
/// occur in the data and then a row uniformly within it.
class BatchSampler {
 public:
  BatchSampler(const EncodedMatrix& data, std::optional<std::string> balance_on = std::nullopt);

  EncodedMatrix sample(std::size_t batch_size, Rng& rng) const;
  /// Row indices only; `sample` gathers these rows.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;

  std::size_t rows() const { return data_->rows(); }

 private:
  const EncodedMatrix* data_;
  std::vector<std::vector<std::size_t>> groups_;  // empty unless balancing
};

EncodedMatrix sample_batch(const EncodedMatrix& m, std::size_t batch_size, Rng& rng,
                           const std::optional<std::string>& balance_on = std::nullopt);

/// Gathers the given rows of `m` in order.
EncodedMatrix gather_rows(const EncodedMatrix& m, const std::vector<std::size_t>& rows);

}  // namespace discgan::data
