#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace swae {

/// Dense row-major array of doubles.
///
/// Every extent is positive and the buffer holds exactly the product of the
/// extents. A default-constructed tensor is an empty placeholder with no
/// shape; it is the only tensor with size() == 0.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor matrix(std::size_t rows, std::size_t cols, double fill = 0.0) {
    return Tensor({rows, cols}, fill);
  }
  static Tensor vector(std::size_t n, double fill = 0.0) { return Tensor({n}, fill); }
  static Tensor vector(std::vector<double> values);

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  /// Leading extent. For a rank-1 tensor this is its length.
  std::size_t rows() const noexcept { return shape_.empty() ? 0 : shape_.front(); }
  /// Product of the trailing extents (1 for rank-1 tensors).
  std::size_t cols() const noexcept { return rows() == 0 ? 0 : data_.size() / rows(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols(), cols()};
  }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols() + c]; }

  void fill(double value) noexcept;
  bool all_finite() const noexcept;

  /// Rows selected by index, in the given order.
  Tensor gather_rows(std::span<const std::size_t> indices) const;
  /// Copies one row into a 1×cols matrix.
  Tensor row_matrix(std::size_t r) const;

  bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }
  std::string shape_string() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Throws DimensionError unless the tensor is rank 2 with the given column count.
void require_matrix(const Tensor& t, std::size_t cols, const char* what);
/// Throws DimensionError unless both tensors share a shape.
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);
/// Throws NumericError if any entry is NaN or infinite.
void require_finite(const Tensor& t, const char* what);

}  // namespace swae
