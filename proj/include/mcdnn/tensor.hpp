#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mcdnn/error.hpp"
#include "mcdnn/rng.hpp"

namespace mcdnn {

/// Dense row-major array of 64-bit reals. Index (i0,...,ik) maps to offset
/// i0*(e1*...*ek) + ... + ik. Tensors are plain values: copy freely, share
/// read-only, never share a mutable one between workers.
class Tensor {
public:
    /// Empty tensor (no shape, no data).
    Tensor() = default;

    /// Tensor of the given shape with every element set to fill.
    /// All extents must be >= 1.
    explicit Tensor(std::vector<int> shape, double fill = 0.0);

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int extent(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::size_t offset(const std::vector<int>& index) const;
    double& at(const std::vector<int>& index) { return data_[offset(index)]; }
    double at(const std::vector<int>& index) const { return data_[offset(index)]; }

    // Fast paths for the layer math.
    double& at3(int m, int y, int x) {
        return data_[(static_cast<std::size_t>(m) * shape_[1] + y) * shape_[2] + x];
    }
    double at3(int m, int y, int x) const {
        return data_[(static_cast<std::size_t>(m) * shape_[1] + y) * shape_[2] + x];
    }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    void fill(double v);

    /// Reinterpret as a new shape with identical element count. Row-major
    /// data is untouched, so flattening [maps][rows][cols] is free.
    Tensor reshaped(std::vector<int> shape) const;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

/// Each element drawn i.i.d. uniform in [lo, hi); the generator advances once
/// per element in row-major order.
void fill_uniform(Tensor& t, Rng& rng, double lo, double hi);

/// Shape-preserving map.
Tensor elementwise(const Tensor& t, const std::function<double(double)>& f);

/// Left fold over the elements in row-major order; empty tensor gives init.
double reduce(const Tensor& t, const std::function<double(double, double)>& op, double init);

} // namespace mcdnn
