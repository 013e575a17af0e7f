#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace coattn {

/// Dense row-major tensor of 64-bit reals. Extents are positive and the
/// element count always equals the product of the extents. Entries are
/// validated to be finite at construction; graph operations re-validate
/// their outputs.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor full(std::vector<std::size_t> shape, double value);
  static Tensor from(std::vector<std::size_t> shape, std::vector<double> data);
  static Tensor vec(std::vector<double> data);
  static Tensor mat(std::size_t rows, std::size_t cols,
                    std::vector<double> data);
  static Tensor identity(std::size_t n);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t rows() const;  // rank-2 only
  std::size_t cols() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double at2(std::size_t r, std::size_t c) const;
  double& at2(std::size_t r, std::size_t c);

  const std::vector<double>& vector() const { return data_; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
  std::string shape_str() const;
  void fill(double v);

  /// Throws NumericError naming `what` if any entry is NaN or infinite.
  void check_finite(const char* what) const;

 private:
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string shape_to_string(const std::vector<std::size_t>& shape);

bool all_finite(const double* x, std::size_t n);

}  // namespace coattn
