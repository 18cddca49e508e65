#include "hanet/layers.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hanet {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

// Unpack one group's channels of one sample into a (c*k*k, out_h*out_w)
// patch matrix. Out-of-range taps (padding) contribute zeros.
void im2col(const double* x, int channels, int h, int w, int kernel, int pad, int dil,
            int out_h, int out_w, double* col) {
    const std::int64_t out_plane = static_cast<std::int64_t>(out_h) * out_w;
    std::int64_t row = 0;
    for (int c = 0; c < channels; ++c) {
        const double* plane = x + static_cast<std::int64_t>(c) * h * w;
        for (int ki = 0; ki < kernel; ++ki) {
            for (int kj = 0; kj < kernel; ++kj, ++row) {
                double* dst = col + row * out_plane;
                const int ioff = ki * dil - pad;
                const int joff = kj * dil - pad;
                for (int oh = 0; oh < out_h; ++oh) {
                    const int ih = oh + ioff;
                    if (ih < 0 || ih >= h) {
                        for (int ow = 0; ow < out_w; ++ow) *dst++ = 0.0;
                        continue;
                    }
                    const double* src_row = plane + static_cast<std::int64_t>(ih) * w;
                    for (int ow = 0; ow < out_w; ++ow) {
                        const int iw = ow + joff;
                        *dst++ = (iw >= 0 && iw < w) ? src_row[iw] : 0.0;
                    }
                }
            }
        }
    }
}

// Transpose of im2col: scatter-add a patch matrix back into the input grad.
void col2im(const double* col, int channels, int h, int w, int kernel, int pad, int dil,
            int out_h, int out_w, double* dx) {
    const std::int64_t out_plane = static_cast<std::int64_t>(out_h) * out_w;
    std::int64_t row = 0;
    for (int c = 0; c < channels; ++c) {
        double* plane = dx + static_cast<std::int64_t>(c) * h * w;
        for (int ki = 0; ki < kernel; ++ki) {
            for (int kj = 0; kj < kernel; ++kj, ++row) {
                const double* src = col + row * out_plane;
                const int ioff = ki * dil - pad;
                const int joff = kj * dil - pad;
                for (int oh = 0; oh < out_h; ++oh) {
                    const int ih = oh + ioff;
                    if (ih < 0 || ih >= h) {
                        src += out_w;
                        continue;
                    }
                    double* dst_row = plane + static_cast<std::int64_t>(ih) * w;
                    for (int ow = 0; ow < out_w; ++ow) {
                        const int iw = ow + joff;
                        if (iw >= 0 && iw < w) dst_row[iw] += *src;
                        ++src;
                    }
                }
            }
        }
    }
}

}  // namespace

Conv2d::Conv2d(int in_channels, int out_channels, int kernel, int padding, int dilation, int groups)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_(kernel),
      padding_(padding),
      dilation_(dilation),
      groups_(groups),
      weight_({out_channels, in_channels / groups, kernel, kernel}),
      bias_({out_channels}),
      weight_grad_({out_channels, in_channels / groups, kernel, kernel}),
      bias_grad_({out_channels}) {
    if (in_channels % groups != 0 || out_channels % groups != 0)
        throw std::invalid_argument("Conv2d: channels must be divisible by groups");
}

void Conv2d::init(Rng& rng) {
    const int fan_in = (in_channels_ / groups_) * kernel_ * kernel_;
    const double std = std::sqrt(2.0 / fan_in);
    for (std::int64_t i = 0; i < weight_.size(); ++i) weight_[i] = rng.normal() * std;
    bias_.zero();
}

Tensor Conv2d::forward(const Tensor& x, bool training) {
    if (x.rank() != 4 || x.dim(1) != in_channels_)
        throw std::invalid_argument("Conv2d: input channel mismatch");
    const int batch = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int out_h = output_size(h), out_w = output_size(w);
    if (out_h <= 0 || out_w <= 0) throw std::invalid_argument("Conv2d: input too small for kernel");

    const int in_pg = in_channels_ / groups_;
    const int out_pg = out_channels_ / groups_;
    const std::int64_t out_plane = static_cast<std::int64_t>(out_h) * out_w;
    const std::int64_t in_plane = static_cast<std::int64_t>(h) * w;
    const int col_rows = in_pg * kernel_ * kernel_;

    Tensor out({batch, out_channels_, out_h, out_w});
    std::vector<double> col(static_cast<std::size_t>(col_rows) * out_plane);

    for (int b = 0; b < batch; ++b) {
        for (int g = 0; g < groups_; ++g) {
            const double* xg = x.data() + (static_cast<std::int64_t>(b) * in_channels_ + g * in_pg) * in_plane;
            im2col(xg, in_pg, h, w, kernel_, padding_, dilation_, out_h, out_w, col.data());
            ConstMapMat wmat(weight_.data() + static_cast<std::int64_t>(g) * out_pg * col_rows, out_pg, col_rows);
            ConstMapMat cmat(col.data(), col_rows, out_plane);
            MapMat ymat(out.data() + (static_cast<std::int64_t>(b) * out_channels_ + g * out_pg) * out_plane,
                        out_pg, out_plane);
            ymat.noalias() = wmat * cmat;
        }
        for (int oc = 0; oc < out_channels_; ++oc) {
            double* plane = out.data() + (static_cast<std::int64_t>(b) * out_channels_ + oc) * out_plane;
            const double bv = bias_[oc];
            for (std::int64_t i = 0; i < out_plane; ++i) plane[i] += bv;
        }
    }

    if (training) cached_input_ = x;
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    if (cached_input_.empty()) throw std::logic_error("Conv2d::backward without a training forward");
    const Tensor& x = cached_input_;
    const int batch = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int out_h = grad_out.dim(2), out_w = grad_out.dim(3);
    const int in_pg = in_channels_ / groups_;
    const int out_pg = out_channels_ / groups_;
    const std::int64_t out_plane = static_cast<std::int64_t>(out_h) * out_w;
    const std::int64_t in_plane = static_cast<std::int64_t>(h) * w;
    const int col_rows = in_pg * kernel_ * kernel_;

    Tensor grad_in({batch, in_channels_, h, w});
    std::vector<double> col(static_cast<std::size_t>(col_rows) * out_plane);
    std::vector<double> dcol(static_cast<std::size_t>(col_rows) * out_plane);

    for (int b = 0; b < batch; ++b) {
        for (int g = 0; g < groups_; ++g) {
            const double* xg = x.data() + (static_cast<std::int64_t>(b) * in_channels_ + g * in_pg) * in_plane;
            im2col(xg, in_pg, h, w, kernel_, padding_, dilation_, out_h, out_w, col.data());

            ConstMapMat dymat(grad_out.data() + (static_cast<std::int64_t>(b) * out_channels_ + g * out_pg) * out_plane,
                              out_pg, out_plane);
            ConstMapMat cmat(col.data(), col_rows, out_plane);
            MapMat dwmat(weight_grad_.data() + static_cast<std::int64_t>(g) * out_pg * col_rows, out_pg, col_rows);
            dwmat.noalias() += dymat * cmat.transpose();

            ConstMapMat wmat(weight_.data() + static_cast<std::int64_t>(g) * out_pg * col_rows, out_pg, col_rows);
            MapMat dcmat(dcol.data(), col_rows, out_plane);
            dcmat.noalias() = wmat.transpose() * dymat;
            col2im(dcol.data(), in_pg, h, w, kernel_, padding_, dilation_, out_h, out_w,
                   grad_in.data() + (static_cast<std::int64_t>(b) * in_channels_ + g * in_pg) * in_plane);
        }
        for (int oc = 0; oc < out_channels_; ++oc) {
            const double* plane = grad_out.data() + (static_cast<std::int64_t>(b) * out_channels_ + oc) * out_plane;
            double sum = 0.0;
            for (std::int64_t i = 0; i < out_plane; ++i) sum += plane[i];
            bias_grad_[oc] += sum;
        }
    }
    return grad_in;
}

void Conv2d::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".weight", &weight_, &weight_grad_, true, false});
    out.push_back({prefix + ".bias", &bias_, &bias_grad_, true, false});
}

BatchNorm2d::BatchNorm2d(int channels, double momentum, double eps)
    : channels_(channels),
      momentum_(momentum),
      eps_(eps),
      scale_(Tensor::full({channels}, 1.0)),
      shift_({channels}),
      scale_grad_({channels}),
      shift_grad_({channels}),
      running_mean_({channels}),
      running_var_(Tensor::full({channels}, 1.0)) {}

Tensor BatchNorm2d::forward(const Tensor& x, bool training) {
    if (x.rank() != 4 || x.dim(1) != channels_)
        throw std::invalid_argument("BatchNorm2d: input channel mismatch");
    const int batch = x.dim(0), h = x.dim(2), w = x.dim(3);
    const std::int64_t plane = static_cast<std::int64_t>(h) * w;
    const std::int64_t n = static_cast<std::int64_t>(batch) * plane;

    Tensor out(x.shape());
    cached_norm_ = Tensor(x.shape());
    inv_std_.assign(static_cast<std::size_t>(channels_), 0.0);
    trained_forward_ = training;

    for (int c = 0; c < channels_; ++c) {
        double mean, var;
        if (training) {
            double sum = 0.0;
            for (int b = 0; b < batch; ++b) {
                const double* p = x.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
                for (std::int64_t i = 0; i < plane; ++i) sum += p[i];
            }
            mean = sum / static_cast<double>(n);
            double sq = 0.0;
            for (int b = 0; b < batch; ++b) {
                const double* p = x.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
                for (std::int64_t i = 0; i < plane; ++i) {
                    const double d = p[i] - mean;
                    sq += d * d;
                }
            }
            var = sq / static_cast<double>(n);  // biased, used for normalization
            const double unbiased = n > 1 ? sq / static_cast<double>(n - 1) : var;
            running_mean_[c] = (1.0 - momentum_) * running_mean_[c] + momentum_ * mean;
            running_var_[c] = (1.0 - momentum_) * running_var_[c] + momentum_ * unbiased;
        } else {
            mean = running_mean_[c];
            var = running_var_[c];
        }
        const double inv = 1.0 / std::sqrt(var + eps_);
        inv_std_[static_cast<std::size_t>(c)] = inv;
        const double g = scale_[c], sh = shift_[c];
        for (int b = 0; b < batch; ++b) {
            const double* p = x.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            double* q = out.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            double* nq = cached_norm_.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            for (std::int64_t i = 0; i < plane; ++i) {
                const double xn = (p[i] - mean) * inv;
                nq[i] = xn;
                q[i] = g * xn + sh;
            }
        }
    }
    return out;
}

Tensor BatchNorm2d::backward(const Tensor& grad_out) {
    if (cached_norm_.empty()) throw std::logic_error("BatchNorm2d::backward without forward");
    const int batch = grad_out.dim(0), h = grad_out.dim(2), w = grad_out.dim(3);
    const std::int64_t plane = static_cast<std::int64_t>(h) * w;
    const double n = static_cast<double>(static_cast<std::int64_t>(batch) * plane);

    Tensor grad_in(grad_out.shape());
    for (int c = 0; c < channels_; ++c) {
        double sum_dy = 0.0, sum_dy_xn = 0.0;
        for (int b = 0; b < batch; ++b) {
            const double* dy = grad_out.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            const double* xn = cached_norm_.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            for (std::int64_t i = 0; i < plane; ++i) {
                sum_dy += dy[i];
                sum_dy_xn += dy[i] * xn[i];
            }
        }
        scale_grad_[c] += sum_dy_xn;
        shift_grad_[c] += sum_dy;

        const double g = scale_[c];
        const double inv = inv_std_[static_cast<std::size_t>(c)];
        for (int b = 0; b < batch; ++b) {
            const double* dy = grad_out.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            const double* xn = cached_norm_.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            double* dx = grad_in.data() + (static_cast<std::int64_t>(b) * channels_ + c) * plane;
            if (trained_forward_) {
                // differentiate through the batch statistics
                const double mean_dy = sum_dy / n;
                const double mean_dy_xn = sum_dy_xn / n;
                for (std::int64_t i = 0; i < plane; ++i)
                    dx[i] = g * inv * (dy[i] - mean_dy - xn[i] * mean_dy_xn);
            } else {
                for (std::int64_t i = 0; i < plane; ++i) dx[i] = g * inv * dy[i];
            }
        }
    }
    return grad_in;
}

void BatchNorm2d::collect(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".weight", &scale_, &scale_grad_, true, true});
    out.push_back({prefix + ".bias", &shift_, &shift_grad_, true, true});
    out.push_back({prefix + ".running_mean", &running_mean_, nullptr, false, true});
    out.push_back({prefix + ".running_var", &running_var_, nullptr, false, true});
}

Tensor ReLU::forward(const Tensor& x, bool training) {
    Tensor out(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    if (training) cached_output_ = out;
    return out;
}

Tensor ReLU::backward(const Tensor& grad_out) const {
    Tensor grad_in(grad_out.shape());
    for (std::int64_t i = 0; i < grad_out.size(); ++i)
        grad_in[i] = cached_output_[i] > 0.0 ? grad_out[i] : 0.0;
    return grad_in;
}

Tensor AdaptiveAvgPool2d::forward(const Tensor& x, bool training) {
    (void)training;
    batch_ = x.dim(0);
    channels_ = x.dim(1);
    in_h_ = x.dim(2);
    in_w_ = x.dim(3);
    Tensor out({batch_, channels_, out_size_, out_size_});
    for (int b = 0; b < batch_; ++b) {
        for (int c = 0; c < channels_; ++c) {
            for (int oh = 0; oh < out_size_; ++oh) {
                const int h0 = oh * in_h_ / out_size_;
                const int h1 = ((oh + 1) * in_h_ + out_size_ - 1) / out_size_;
                for (int ow = 0; ow < out_size_; ++ow) {
                    const int w0 = ow * in_w_ / out_size_;
                    const int w1 = ((ow + 1) * in_w_ + out_size_ - 1) / out_size_;
                    double sum = 0.0;
                    for (int ih = h0; ih < h1; ++ih)
                        for (int iw = w0; iw < w1; ++iw) sum += x.at(b, c, ih, iw);
                    out.at(b, c, oh, ow) = sum / ((h1 - h0) * (w1 - w0));
                }
            }
        }
    }
    return out;
}

Tensor AdaptiveAvgPool2d::backward(const Tensor& grad_out) const {
    Tensor grad_in({batch_, channels_, in_h_, in_w_});
    for (int b = 0; b < batch_; ++b) {
        for (int c = 0; c < channels_; ++c) {
            for (int oh = 0; oh < out_size_; ++oh) {
                const int h0 = oh * in_h_ / out_size_;
                const int h1 = ((oh + 1) * in_h_ + out_size_ - 1) / out_size_;
                for (int ow = 0; ow < out_size_; ++ow) {
                    const int w0 = ow * in_w_ / out_size_;
                    const int w1 = ((ow + 1) * in_w_ + out_size_ - 1) / out_size_;
                    const double share = grad_out.at(b, c, oh, ow) / ((h1 - h0) * (w1 - w0));
                    for (int ih = h0; ih < h1; ++ih)
                        for (int iw = w0; iw < w1; ++iw) grad_in.at(b, c, ih, iw) += share;
                }
            }
        }
    }
    return grad_in;
}

Tensor BilinearUpsample::forward(const Tensor& x, bool training) {
    (void)training;
    batch_ = x.dim(0);
    channels_ = x.dim(1);
    in_h_ = x.dim(2);
    in_w_ = x.dim(3);
    Tensor out({batch_, channels_, out_size_, out_size_});
    const double sh = static_cast<double>(in_h_) / out_size_;
    const double sw = static_cast<double>(in_w_) / out_size_;
    for (int oh = 0; oh < out_size_; ++oh) {
        const double src_h = (oh + 0.5) * sh - 0.5;
        const int h0 = std::max(0, static_cast<int>(std::floor(src_h)));
        const int h1 = std::min(in_h_ - 1, h0 + 1);
        const double fh = std::min(1.0, std::max(0.0, src_h - h0));
        for (int ow = 0; ow < out_size_; ++ow) {
            const double src_w = (ow + 0.5) * sw - 0.5;
            const int w0 = std::max(0, static_cast<int>(std::floor(src_w)));
            const int w1 = std::min(in_w_ - 1, w0 + 1);
            const double fw = std::min(1.0, std::max(0.0, src_w - w0));
            for (int b = 0; b < batch_; ++b)
                for (int c = 0; c < channels_; ++c)
                    out.at(b, c, oh, ow) = (1 - fh) * ((1 - fw) * x.at(b, c, h0, w0) + fw * x.at(b, c, h0, w1)) +
                                           fh * ((1 - fw) * x.at(b, c, h1, w0) + fw * x.at(b, c, h1, w1));
        }
    }
    return out;
}

Tensor BilinearUpsample::backward(const Tensor& grad_out) const {
    Tensor grad_in({batch_, channels_, in_h_, in_w_});
    const double sh = static_cast<double>(in_h_) / out_size_;
    const double sw = static_cast<double>(in_w_) / out_size_;
    for (int oh = 0; oh < out_size_; ++oh) {
        const double src_h = (oh + 0.5) * sh - 0.5;
        const int h0 = std::max(0, static_cast<int>(std::floor(src_h)));
        const int h1 = std::min(in_h_ - 1, h0 + 1);
        const double fh = std::min(1.0, std::max(0.0, src_h - h0));
        for (int ow = 0; ow < out_size_; ++ow) {
            const double src_w = (ow + 0.5) * sw - 0.5;
            const int w0 = std::max(0, static_cast<int>(std::floor(src_w)));
            const int w1 = std::min(in_w_ - 1, w0 + 1);
            const double fw = std::min(1.0, std::max(0.0, src_w - w0));
            for (int b = 0; b < batch_; ++b) {
                for (int c = 0; c < channels_; ++c) {
                    const double dy = grad_out.at(b, c, oh, ow);
                    grad_in.at(b, c, h0, w0) += (1 - fh) * (1 - fw) * dy;
                    grad_in.at(b, c, h0, w1) += (1 - fh) * fw * dy;
                    grad_in.at(b, c, h1, w0) += fh * (1 - fw) * dy;
                    grad_in.at(b, c, h1, w1) += fh * fw * dy;
                }
            }
        }
    }
    return grad_in;
}

}  // namespace hanet
