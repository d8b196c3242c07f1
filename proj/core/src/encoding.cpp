#include "qconv/encoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qconv {

void PatchEncoding::validate() const {
    if (image_h <= 0 || image_w <= 0 || patch_h <= 0 || patch_w <= 0) {
        throw std::invalid_argument("PatchEncoding: dimensions must be positive");
    }
    if (image_h % patch_h != 0 || image_w % patch_w != 0) {
        throw std::invalid_argument("PatchEncoding: patch must tile the image");
    }
    if (!is_power_of_two(static_cast<std::size_t>(total_len()))) {
        throw std::invalid_argument(
            "PatchEncoding: total pixel count must be a power of two");
    }
}

std::size_t PatchEncoding::flat_index(int r, int c) const {
    const int patch_row = r / patch_h;
    const int patch_col = c / patch_w;
    const int within = (r % patch_h) * patch_w + (c % patch_w);
    const int patch_index = patch_row * patches_per_row() + patch_col;
    return static_cast<std::size_t>(patch_index) * patch_len() + within;
}

RealMatrix pad_image(const RealMatrix &img, PadMode mode) {
    if (img.rows() != 28 || img.cols() != 28) {
        throw std::invalid_argument("pad_image: expected a 28x28 image, got " +
                                    std::to_string(img.rows()) + "x" +
                                    std::to_string(img.cols()));
    }
    const std::size_t offset = (mode == PadMode::Centered) ? 2 : 0;
    RealMatrix out(32, 32);
    for (std::size_t r = 0; r < 28; ++r) {
        for (std::size_t c = 0; c < 28; ++c) {
            out(r + offset, c + offset) = img(r, c);
        }
    }
    return out;
}

std::vector<double> patch_flatten(const RealMatrix &img,
                                  const PatchEncoding &enc) {
    enc.validate();
    if (img.rows() != static_cast<std::size_t>(enc.image_h) ||
        img.cols() != static_cast<std::size_t>(enc.image_w)) {
        throw std::invalid_argument("patch_flatten: image shape mismatch");
    }
    std::vector<double> vec(enc.total_len());
    for (int r = 0; r < enc.image_h; ++r) {
        for (int c = 0; c < enc.image_w; ++c) {
            vec[enc.flat_index(r, c)] = img(r, c);
        }
    }
    return vec;
}

RealMatrix patch_unflatten(std::span<const double> vec,
                           const PatchEncoding &enc) {
    enc.validate();
    if (vec.size() != static_cast<std::size_t>(enc.total_len())) {
        throw std::invalid_argument("patch_unflatten: length mismatch");
    }
    RealMatrix img(enc.image_h, enc.image_w);
    for (int r = 0; r < enc.image_h; ++r) {
        for (int c = 0; c < enc.image_w; ++c) {
            img(r, c) = vec[enc.flat_index(r, c)];
        }
    }
    return img;
}

StateVector amplitude_encode(std::span<const double> vec) {
    if (!is_power_of_two(vec.size())) {
        throw std::invalid_argument("amplitude_encode: length must be a power of two");
    }
    double norm = 0.0;
    for (const double v : vec) {
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        throw std::invalid_argument("amplitude_encode: zero vector");
    }
    const int m = log2_exact(vec.size());
    std::vector<cdouble> amps(vec.size());
    for (std::size_t i = 0; i < vec.size(); ++i) {
        amps[i] = cdouble{vec[i] / norm, 0.0};
    }
    return StateVector::from_amplitudes(m, std::move(amps));
}

} // namespace qconv
