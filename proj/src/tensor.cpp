#include "coattn/tensor.hpp"

#include <cmath>
#include <sstream>

#include "coattn/errors.hpp"

namespace coattn {

std::string shape_to_string(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

bool all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  std::size_t prod = 1;
  for (std::size_t e : shape_) {
    if (e == 0)
      throw DimensionError("tensor extents must be positive, got " +
                           shape_to_string(shape_));
    prod *= e;
  }
  if (shape_.empty() || prod != data_.size())
    throw DimensionError("tensor shape " + shape_to_string(shape_) +
                         " does not match element count " +
                         std::to_string(data_.size()));
  check_finite("tensor construction");
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  std::size_t prod = 1;
  for (std::size_t e : shape) prod *= e;
  return Tensor(std::move(shape), std::vector<double>(prod, 0.0));
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
  std::size_t prod = 1;
  for (std::size_t e : shape) prod *= e;
  return Tensor(std::move(shape), std::vector<double>(prod, value));
}

Tensor Tensor::from(std::vector<std::size_t> shape,
                    std::vector<double> data) {
  return Tensor(std::move(shape), std::move(data));
}

Tensor Tensor::vec(std::vector<double> data) {
  return Tensor({data.size()}, std::move(data));
}

Tensor Tensor::mat(std::size_t rows, std::size_t cols,
                   std::vector<double> data) {
  return Tensor({rows, cols}, std::move(data));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t = zeros({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
  return t;
}

std::size_t Tensor::rows() const {
  if (rank() != 2)
    throw DimensionError("rows() on tensor of shape " + shape_str());
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2)
    throw DimensionError("cols() on tensor of shape " + shape_str());
  return shape_[1];
}

double Tensor::at2(std::size_t r, std::size_t c) const {
  return data_[r * cols() + c];
}

double& Tensor::at2(std::size_t r, std::size_t c) {
  return data_[r * cols() + c];
}

std::string Tensor::shape_str() const { return shape_to_string(shape_); }

void Tensor::fill(double v) {
  for (double& x : data_) x = v;
}

void Tensor::check_finite(const char* what) const {
  if (!all_finite(data_.data(), data_.size()))
    throw NumericError(std::string(what) + ": non-finite value in tensor " +
                       shape_str());
}

}  // namespace coattn
