#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gplp/error.hpp"

namespace gplp {

// Dense row-major matrix. Every tensor in the model is two-dimensional; a
// length-q vector is stored as a 1 x q row.
template <class Scalar>
class BasicTensor {
 public:
  using value_type = Scalar;

  BasicTensor() = default;
  BasicTensor(std::size_t rows, std::size_t cols, Scalar fill = Scalar(0))
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  BasicTensor(std::size_t rows, std::size_t cols, std::vector<Scalar> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_)
      throw Error(ErrorKind::ShapeMismatch, "value count " + std::to_string(values_.size()) +
                                                " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  BasicTensor(std::initializer_list<std::initializer_list<Scalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    values_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged initializer");
      values_.insert(values_.end(), r.begin(), r.end());
    }
  }

  static BasicTensor row(std::initializer_list<Scalar> v) {
    return BasicTensor(1, v.size(), std::vector<Scalar>(v));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  std::array<std::size_t, 2> shape() const { return {rows_, cols_}; }
  bool same_shape(const BasicTensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  Scalar* data() { return values_.data(); }
  const Scalar* data() const { return values_.data(); }
  std::span<Scalar> values() { return values_; }
  std::span<const Scalar> values() const { return values_; }
  std::span<const Scalar> row_span(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  Scalar& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  Scalar& operator[](std::size_t i) { return values_[i]; }
  Scalar operator[](std::size_t i) const { return values_[i]; }

  void fill(Scalar v) { std::fill(values_.begin(), values_.end(), v); }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](Scalar v) { return std::isfinite(v); });
  }

  template <class Other>
  BasicTensor<Other> cast() const {
    std::vector<Other> v(values_.begin(), values_.end());
    return BasicTensor<Other>(rows_, cols_, std::move(v));
  }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> values_;
};

using Tensor = BasicTensor<float>;

}  // namespace gplp
