#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hanet/rng.hpp"
#include "hanet/tensor.hpp"

namespace hanet {

/// A named view into a layer's state. `grad` is null for buffers (running
/// statistics); `norm_param` marks normalization scales/shifts so the
/// optimizer can exempt them from weight decay when configured.
struct ParamRef {
    std::string name;
    Tensor* value = nullptr;
    Tensor* grad = nullptr;
    bool learnable = true;
    bool norm_param = false;
};

/// 2-D convolution, stride 1, square kernel, optional dilation and groups.
/// Forward caches the input in training mode so backward can rebuild the
/// im2col buffer for the weight gradient.
class Conv2d {
public:
    Conv2d(int in_channels, int out_channels, int kernel, int padding, int dilation = 1, int groups = 1);

    void init(Rng& rng);  // Kaiming fan-in normal weights, zero bias

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& grad_out);

    void collect(const std::string& prefix, std::vector<ParamRef>& out);

    Tensor& weight() { return weight_; }
    const Tensor& weight() const { return weight_; }
    Tensor& bias() { return bias_; }

    int in_channels() const { return in_channels_; }
    int out_channels() const { return out_channels_; }
    int output_size(int input_size) const { return input_size + 2 * padding_ - dilation_ * (kernel_ - 1); }
    std::int64_t macs(int out_h, int out_w) const {
        return static_cast<std::int64_t>(out_h) * out_w * out_channels_ * (in_channels_ / groups_) * kernel_ * kernel_;
    }

private:
    int in_channels_, out_channels_, kernel_, padding_, dilation_, groups_;
    Tensor weight_;  // (out, in/groups, k, k)
    Tensor bias_;    // (out)
    Tensor weight_grad_, bias_grad_;
    Tensor cached_input_;
};

/// Batch normalization over (batch, height, width) per channel. Training
/// mode normalizes with batch statistics and updates the running ones
/// (momentum 0.1); evaluation mode uses the running statistics, which makes
/// inference deterministic.
class BatchNorm2d {
public:
    explicit BatchNorm2d(int channels, double momentum = 0.1, double eps = 1e-5);

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& grad_out);

    void collect(const std::string& prefix, std::vector<ParamRef>& out);

    Tensor& scale() { return scale_; }
    Tensor& shift() { return shift_; }
    Tensor& running_mean() { return running_mean_; }
    Tensor& running_var() { return running_var_; }

private:
    int channels_;
    double momentum_, eps_;
    Tensor scale_, shift_;
    Tensor scale_grad_, shift_grad_;
    Tensor running_mean_, running_var_;
    // backward state
    bool trained_forward_ = false;
    Tensor cached_norm_;     // normalized input
    std::vector<double> inv_std_;
};

class ReLU {
public:
    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& grad_out) const;

private:
    Tensor cached_output_;
};

/// Adaptive average pooling to a fixed square output. Window bounds are
/// floor(i*in/out) .. ceil((i+1)*in/out), matching the usual adaptive
/// semantics; exact 2x reduction falls out when in = 2*out.
class AdaptiveAvgPool2d {
public:
    explicit AdaptiveAvgPool2d(int out_size) : out_size_(out_size) {}

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& grad_out) const;

    int out_size() const { return out_size_; }

private:
    int out_size_;
    int in_h_ = 0, in_w_ = 0, batch_ = 0, channels_ = 0;
};

/// Bilinear interpolation to a fixed square output (half-pixel centers,
/// i.e. align_corners = false). Identity when input already matches.
class BilinearUpsample {
public:
    explicit BilinearUpsample(int out_size) : out_size_(out_size) {}

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& grad_out) const;

private:
    int out_size_;
    int in_h_ = 0, in_w_ = 0, batch_ = 0, channels_ = 0;
};

}  // namespace hanet
