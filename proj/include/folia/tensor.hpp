#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "folia/jet.hpp"

namespace folia {

/// Dense row-major array of runtime rank, templated on the scalar.
template <class Scalar>
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<int> shape, const Scalar& fill) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int s : shape_) n *= static_cast<std::size_t>(s);
    data_.assign(n, fill);
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int extent(int axis) const { return shape_[axis]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  template <class... I>
  Scalar& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const Scalar& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }
  Scalar& at(std::span<const int> idx) { return data_[offset(idx)]; }
  const Scalar& at(std::span<const int> idx) const { return data_[offset(idx)]; }

  Scalar& flat(std::size_t k) { return data_[k]; }
  const Scalar& flat(std::size_t k) const { return data_[k]; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  /// Multi-index of flat position k.
  std::vector<int> index(std::size_t k) const {
    std::vector<int> idx(shape_.size());
    for (std::size_t a = shape_.size(); a-- > 0;) {
      idx[a] = static_cast<int>(k % shape_[a]);
      k /= shape_[a];
    }
    return idx;
  }

 private:
  std::size_t offset(std::initializer_list<int> idx) const {
    return offset(std::span<const int>(idx.begin(), idx.size()));
  }
  std::size_t offset(std::span<const int> idx) const {
    if (idx.size() != shape_.size()) throw std::out_of_range("tensor rank mismatch");
    std::size_t k = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (idx[a] < 0 || idx[a] >= shape_[a]) throw std::out_of_range("tensor index out of range");
      k = k * shape_[a] + idx[a];
    }
    return k;
  }

  std::vector<int> shape_;
  std::vector<Scalar> data_;
};

using JetTensor = Tensor<Jet>;
using RealTensor = Tensor<double>;

inline JetTensor zeros(std::vector<int> shape, int dim, int order) {
  return JetTensor(std::move(shape), Jet(dim, order));
}

inline RealTensor values(const JetTensor& t) {
  RealTensor out(t.shape(), 0.0);
  for (std::size_t k = 0; k < t.size(); ++k) out.flat(k) = t.flat(k).value();
  return out;
}

inline JetTensor truncated(const JetTensor& t, int order) {
  if (t.empty()) return t;
  JetTensor out(t.shape(), t.flat(0).truncated(order));
  for (std::size_t k = 0; k < t.size(); ++k) out.flat(k) = t.flat(k).truncated(order);
  return out;
}

}  // namespace folia
