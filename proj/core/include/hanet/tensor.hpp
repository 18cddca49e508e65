#pragma once

#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace hanet {

/// Dense row-major tensor of doubles. Shapes follow the (batch, channels,
/// height, width) convention used throughout the network code; lower-rank
/// tensors are used for biases and normalization statistics.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::initializer_list<int> shape);

    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, double value);

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double& at(int a) { return data_[static_cast<std::size_t>(offset1(a))]; }
    double at(int a) const { return data_[static_cast<std::size_t>(offset1(a))]; }
    double& at(int a, int b) { return data_[static_cast<std::size_t>(offset2(a, b))]; }
    double at(int a, int b) const { return data_[static_cast<std::size_t>(offset2(a, b))]; }
    double& at(int a, int b, int c) { return data_[static_cast<std::size_t>(offset3(a, b, c))]; }
    double at(int a, int b, int c) const { return data_[static_cast<std::size_t>(offset3(a, b, c))]; }
    double& at(int a, int b, int c, int d) { return data_[static_cast<std::size_t>(offset4(a, b, c, d))]; }
    double at(int a, int b, int c, int d) const { return data_[static_cast<std::size_t>(offset4(a, b, c, d))]; }

    void fill(double value);
    void zero() { fill(0.0); }

    /// Elementwise in-place accumulation; shapes must match.
    Tensor& operator+=(const Tensor& other);
    Tensor& operator*=(double scalar);

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

private:
    std::int64_t offset1(int a) const {
        assert(rank() == 1);
        return a;
    }
    std::int64_t offset2(int a, int b) const {
        assert(rank() == 2);
        return static_cast<std::int64_t>(a) * shape_[1] + b;
    }
    std::int64_t offset3(int a, int b, int c) const {
        assert(rank() == 3);
        return (static_cast<std::int64_t>(a) * shape_[1] + b) * shape_[2] + c;
    }
    std::int64_t offset4(int a, int b, int c, int d) const {
        assert(rank() == 4);
        return ((static_cast<std::int64_t>(a) * shape_[1] + b) * shape_[2] + c) * shape_[3] + d;
    }

    std::vector<int> shape_;
    std::vector<double> data_;
};

/// out = a + b elementwise.
Tensor add(const Tensor& a, const Tensor& b);

/// Concatenate rank-4 tensors along the channel axis (dim 1).
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// Concatenate rank-4 tensors along the batch axis (dim 0).
Tensor concat_batch(const Tensor& a, const Tensor& b);

/// Slice a rank-4 tensor along the batch axis: rows [begin, end).
Tensor slice_batch(const Tensor& x, int begin, int end);

/// Row-wise softmax over a (rows, cols) buffer, in place. Uses the usual
/// max-subtraction for stability; every output row sums to 1.
void softmax_rows(double* m, int rows, int cols);

/// Backward of softmax_rows: given y = softmax(x) and dy, writes dx.
/// dx_ij = (dy_ij - sum_k dy_ik y_ik) * y_ij.
void softmax_rows_backward(const double* y, const double* dy, double* dx, int rows, int cols);

}  // namespace hanet
