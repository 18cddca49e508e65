#include "hanet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace hanet {

namespace {
std::int64_t shape_volume(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) {
        if (d < 0) throw std::invalid_argument("tensor dimensions must be nonnegative");
        n *= d;
    }
    return n;
}
}  // namespace

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<std::size_t>(shape_volume(shape_)), 0.0);
}

Tensor::Tensor(std::initializer_list<int> shape) : Tensor(std::vector<int>(shape)) {}

Tensor Tensor::full(std::vector<int> shape, double value) {
    Tensor t(std::move(shape));
    t.fill(value);
    return t;
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Tensor& Tensor::operator+=(const Tensor& other) {
    if (!same_shape(other)) throw std::invalid_argument("tensor shape mismatch in +=");
    const double* src = other.data();
    double* dst = data();
    for (std::int64_t i = 0; i < size(); ++i) dst[i] += src[i];
    return *this;
}

Tensor& Tensor::operator*=(double scalar) {
    for (auto& v : data_) v *= scalar;
    return *this;
}

Tensor add(const Tensor& a, const Tensor& b) {
    Tensor out = a;
    out += b;
    return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.rank() != 4 || b.rank() != 4) throw std::invalid_argument("concat_channels expects rank-4 tensors");
    if (a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3))
        throw std::invalid_argument("concat_channels: batch or spatial dims differ");
    const int batch = a.dim(0), ca = a.dim(1), cb = b.dim(1), h = a.dim(2), w = a.dim(3);
    Tensor out({batch, ca + cb, h, w});
    const std::int64_t plane = static_cast<std::int64_t>(h) * w;
    for (int n = 0; n < batch; ++n) {
        std::memcpy(out.data() + (static_cast<std::int64_t>(n) * (ca + cb)) * plane,
                    a.data() + static_cast<std::int64_t>(n) * ca * plane,
                    static_cast<std::size_t>(ca * plane) * sizeof(double));
        std::memcpy(out.data() + (static_cast<std::int64_t>(n) * (ca + cb) + ca) * plane,
                    b.data() + static_cast<std::int64_t>(n) * cb * plane,
                    static_cast<std::size_t>(cb * plane) * sizeof(double));
    }
    return out;
}

Tensor concat_batch(const Tensor& a, const Tensor& b) {
    if (a.rank() != 4 || b.rank() != 4) throw std::invalid_argument("concat_batch expects rank-4 tensors");
    if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3))
        throw std::invalid_argument("concat_batch: per-sample shapes differ");
    Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2), a.dim(3)});
    std::memcpy(out.data(), a.data(), static_cast<std::size_t>(a.size()) * sizeof(double));
    std::memcpy(out.data() + a.size(), b.data(), static_cast<std::size_t>(b.size()) * sizeof(double));
    return out;
}

Tensor slice_batch(const Tensor& x, int begin, int end) {
    if (x.rank() != 4) throw std::invalid_argument("slice_batch expects a rank-4 tensor");
    if (begin < 0 || end > x.dim(0) || begin > end) throw std::out_of_range("slice_batch range");
    Tensor out({end - begin, x.dim(1), x.dim(2), x.dim(3)});
    const std::int64_t sample = static_cast<std::int64_t>(x.dim(1)) * x.dim(2) * x.dim(3);
    std::memcpy(out.data(), x.data() + begin * sample,
                static_cast<std::size_t>(out.size()) * sizeof(double));
    return out;
}

void softmax_rows(double* m, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        double* row = m + static_cast<std::int64_t>(r) * cols;
        double mx = row[0];
        for (int c = 1; c < cols; ++c) mx = std::max(mx, row[c]);
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) {
            row[c] = std::exp(row[c] - mx);
            sum += row[c];
        }
        const double inv = 1.0 / sum;
        for (int c = 0; c < cols; ++c) row[c] *= inv;
    }
}

void softmax_rows_backward(const double* y, const double* dy, double* dx, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* yr = y + static_cast<std::int64_t>(r) * cols;
        const double* dyr = dy + static_cast<std::int64_t>(r) * cols;
        double* dxr = dx + static_cast<std::int64_t>(r) * cols;
        double dot = 0.0;
        for (int c = 0; c < cols; ++c) dot += dyr[c] * yr[c];
        for (int c = 0; c < cols; ++c) dxr[c] = (dyr[c] - dot) * yr[c];
    }
}

}  // namespace hanet
