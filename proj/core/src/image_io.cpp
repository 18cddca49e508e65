#include "hanet/image.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <stdexcept>

namespace hanet {

ByteImage make_image(int height, int width, int channels) {
    ByteImage img;
    img.height = height;
    img.width = width;
    img.channels = channels;
    img.pixels.assign(static_cast<std::size_t>(static_cast<std::int64_t>(height) * width * channels), 0);
    return img;
}

BinaryMask make_mask(int height, int width) {
    BinaryMask m;
    m.height = height;
    m.width = width;
    m.values.assign(static_cast<std::size_t>(static_cast<std::int64_t>(height) * width), 0);
    return m;
}

Tensor to_chw_tensor(const ByteImage& img) {
    Tensor t({img.channels, img.height, img.width});
    const double inv = 1.0 / 255.0;
    for (int c = 0; c < img.channels; ++c)
        for (int r = 0; r < img.height; ++r)
            for (int col = 0; col < img.width; ++col)
                t.at(c, r, col) = img.at(r, col, c) * inv;
    return t;
}

ByteImage read_image(const std::filesystem::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) throw std::runtime_error("failed to read image: " + path.string());
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    ByteImage img = make_image(rgb.rows, rgb.cols, 3);
    for (int r = 0; r < rgb.rows; ++r) {
        const std::uint8_t* row = rgb.ptr<std::uint8_t>(r);
        std::copy(row, row + static_cast<std::size_t>(rgb.cols) * 3,
                  img.pixels.begin() + static_cast<std::ptrdiff_t>(r) * rgb.cols * 3);
    }
    return img;
}

BinaryMask read_mask(const std::filesystem::path& path) {
    cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (gray.empty()) throw std::runtime_error("failed to read mask: " + path.string());
    BinaryMask mask = make_mask(gray.rows, gray.cols);
    for (int r = 0; r < gray.rows; ++r) {
        const std::uint8_t* row = gray.ptr<std::uint8_t>(r);
        for (int c = 0; c < gray.cols; ++c) mask.at(r, c) = row[c] != 0 ? 1 : 0;
    }
    return mask;
}

void write_image(const std::filesystem::path& path, const ByteImage& img) {
    if (img.channels != 3) throw std::invalid_argument("write_image expects a 3-channel raster");
    cv::Mat rgb(img.height, img.width, CV_8UC3);
    for (int r = 0; r < img.height; ++r) {
        std::uint8_t* row = rgb.ptr<std::uint8_t>(r);
        std::copy(img.pixels.begin() + static_cast<std::ptrdiff_t>(r) * img.width * 3,
                  img.pixels.begin() + static_cast<std::ptrdiff_t>(r + 1) * img.width * 3, row);
    }
    cv::Mat bgr;
    cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
    if (!cv::imwrite(path.string(), bgr)) throw std::runtime_error("failed to write image: " + path.string());
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    cv::Mat gray(mask.height, mask.width, CV_8UC1);
    for (int r = 0; r < mask.height; ++r) {
        std::uint8_t* row = gray.ptr<std::uint8_t>(r);
        for (int c = 0; c < mask.width; ++c) row[c] = mask.at(r, c) ? 255 : 0;
    }
    if (!cv::imwrite(path.string(), gray)) throw std::runtime_error("failed to write mask: " + path.string());
}

}  // namespace hanet
