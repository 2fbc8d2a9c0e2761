#pragma once

#include "corpca/linalg.hpp"

namespace corpca {

/// Supplies consecutive n x alpha blocks of observed data vectors.
class BlockSource {
 public:
  virtual ~BlockSource() = default;

  /// Next `alpha` columns; throws InsufficientDataError when the source cannot
  /// provide a full block.
  virtual RealMatrix next_block(Index alpha) = 0;

  /// Columns handed out so far.
  virtual Index consumed() const = 0;
};

/// Serves blocks out of a fixed matrix, left to right.
class MatrixBlockSource final : public BlockSource {
 public:
  explicit MatrixBlockSource(RealMatrix data) : data_(std::move(data)) {}

  RealMatrix next_block(Index alpha) override {
    if (alpha < 1) throw ParameterError("block length must be positive");
    if (consumed_ + alpha > data_.cols()) {
      throw InsufficientDataError("data exhausted: need " + std::to_string(alpha) + " more columns, " +
                                  std::to_string(data_.cols() - consumed_) + " left");
    }
    RealMatrix block = data_.middleCols(consumed_, alpha);
    consumed_ += alpha;
    return block;
  }

  Index consumed() const override { return consumed_; }

 private:
  RealMatrix data_;
  Index consumed_ = 0;
};

}  // namespace corpca
