// IDX container reader/writer and deterministic class-subset construction.
// Readers accept gzip-compressed files transparently.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qconv/linalg.hpp"

namespace qconv {

struct Sample {
    std::vector<std::uint8_t> pixels; // rows * cols bytes, row-major
    int label = 0;          // original digit label, 0..9
    int remapped_label = 0; // 0-based index within the chosen class subset
};

struct Dataset {
    std::vector<Sample> samples;
    int rows = 0;
    int cols = 0;
    std::vector<int> class_subset; // ascending original labels, empty = all
    std::string images_path;
    std::string labels_path;
    std::uint64_t subset_seed = 0;
};

/// Parse an IDX image file (magic 0x00000803): big-endian header of count,
/// rows, cols followed by row-major unsigned bytes.
std::vector<std::vector<std::uint8_t>>
read_idx_images(const std::string &path, int &rows, int &cols);

/// Parse an IDX label file (magic 0x00000801); labels must be <= 9.
std::vector<int> read_idx_labels(const std::string &path);

void write_idx_images(const std::string &path,
                      const std::vector<std::vector<std::uint8_t>> &images,
                      int rows, int cols);
void write_idx_labels(const std::string &path, const std::vector<int> &labels);

/// Load the image/label pair "train-*" from data_dir (plain or .gz); when a
/// "t10k-*" pair is also present its samples are appended to the pool.
Dataset load_dataset(const std::string &data_dir);

/// Seeded, deterministic per-class selection: per_class_train + per_class_test
/// samples per requested class, disjoint, labels remapped to 0..K-1 in
/// ascending original-label order. Throws when a class has too few samples.
std::pair<Dataset, Dataset> subset(const Dataset &pool,
                                   const std::vector<int> &classes,
                                   int per_class_train, int per_class_test,
                                   std::uint64_t seed);

/// Pixels scaled to [0,1] as a rows x cols matrix.
RealMatrix to_real_matrix(const Sample &sample, int rows, int cols);

} // namespace qconv
