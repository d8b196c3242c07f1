// Image-to-state preparation: zero padding, patch-major pixel rearrangement,
// and amplitude encoding of the resulting vector.

#pragma once

#include <span>
#include <vector>

#include "qconv/linalg.hpp"
#include "qconv/statevector.hpp"

namespace qconv {

/// Where the 28x28 image sits inside the padded 32x32 frame.
enum class PadMode {
    Centered,       // 2-pixel zero margin on every side
    CornerAnchored, // image at the top-left, zeros right/below
};

/// Geometry of the patch-major rearrangement: pixels of each patch_h x
/// patch_w patch become contiguous (row-major within the patch), patches
/// ordered row-major across the image.
struct PatchEncoding {
    int image_h = 0;
    int image_w = 0;
    int patch_h = 0;
    int patch_w = 0;

    int patches_per_row() const { return image_w / patch_w; }
    int patch_len() const { return patch_h * patch_w; }
    int total_len() const { return image_h * image_w; }

    /// Position of raster pixel (r, c) in the flattened vector.
    std::size_t flat_index(int r, int c) const;

    /// Throws unless patch dims divide image dims and total_len is a power
    /// of two (amplitude encoding needs 2^m elements).
    void validate() const;
};

/// Pad a 28x28 image to 32x32 with zeros; added entries are exactly 0.
RealMatrix pad_image(const RealMatrix &img, PadMode mode = PadMode::Centered);

/// Rearrange an image into the patch-major vector described by enc.
std::vector<double> patch_flatten(const RealMatrix &img,
                                  const PatchEncoding &enc);

/// Inverse of patch_flatten; exact (pure index permutation).
RealMatrix patch_unflatten(std::span<const double> vec,
                           const PatchEncoding &enc);

/// L2-normalize vec into the amplitudes of a log2(len)-qubit state.
/// Throws on zero vectors and non-power-of-two lengths.
StateVector amplitude_encode(std::span<const double> vec);

} // namespace qconv
