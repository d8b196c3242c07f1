#include "qconv/mnist_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include <zlib.h>

#include "qconv/random.hpp"

namespace qconv {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

class IdxReader {
  public:
    explicit IdxReader(const std::string &path) : path_(path) {
        std::string actual = path;
        if (!std::filesystem::exists(actual) &&
            std::filesystem::exists(actual + ".gz")) {
            actual += ".gz";
        }
        // gzopen reads both gzip and plain files.
        file_ = gzopen(actual.c_str(), "rb");
        if (file_ == nullptr) {
            throw std::runtime_error("cannot open " + actual);
        }
    }
    ~IdxReader() {
        if (file_ != nullptr) {
            gzclose(file_);
        }
    }
    IdxReader(const IdxReader &) = delete;
    IdxReader &operator=(const IdxReader &) = delete;

    std::uint32_t read_u32_be() {
        std::uint8_t buf[4];
        read_bytes(buf, 4);
        return (std::uint32_t{buf[0]} << 24) | (std::uint32_t{buf[1]} << 16) |
               (std::uint32_t{buf[2]} << 8) | std::uint32_t{buf[3]};
    }

    void read_bytes(std::uint8_t *out, std::size_t count) {
        const int got = gzread(file_, out, static_cast<unsigned>(count));
        if (got < 0 || static_cast<std::size_t>(got) != count) {
            throw std::runtime_error("truncated IDX file: " + path_);
        }
    }

    bool at_eof() {
        std::uint8_t probe;
        return gzread(file_, &probe, 1) == 0;
    }

  private:
    std::string path_;
    gzFile file_ = nullptr;
};

void write_u32_be(std::FILE *f, std::uint32_t v) {
    const std::uint8_t buf[4] = {static_cast<std::uint8_t>(v >> 24),
                                 static_cast<std::uint8_t>(v >> 16),
                                 static_cast<std::uint8_t>(v >> 8),
                                 static_cast<std::uint8_t>(v)};
    if (std::fwrite(buf, 1, 4, f) != 4) {
        throw std::runtime_error("IDX write failed");
    }
}

} // namespace

std::vector<std::vector<std::uint8_t>>
read_idx_images(const std::string &path, int &rows, int &cols) {
    IdxReader in(path);
    const std::uint32_t magic = in.read_u32_be();
    if (magic != kImageMagic) {
        throw std::runtime_error(path + ": not an image file (magic " +
                                 std::to_string(magic) + ")");
    }
    const std::uint32_t count = in.read_u32_be();
    rows = static_cast<int>(in.read_u32_be());
    cols = static_cast<int>(in.read_u32_be());
    if (rows <= 0 || cols <= 0 || rows > 4096 || cols > 4096) {
        throw std::runtime_error(path + ": implausible image dimensions");
    }
    std::vector<std::vector<std::uint8_t>> images(count);
    const std::size_t len = static_cast<std::size_t>(rows) * cols;
    for (auto &img : images) {
        img.resize(len);
        in.read_bytes(img.data(), len);
    }
    if (!in.at_eof()) {
        throw std::runtime_error(path + ": trailing bytes after image data");
    }
    return images;
}

std::vector<int> read_idx_labels(const std::string &path) {
    IdxReader in(path);
    const std::uint32_t magic = in.read_u32_be();
    if (magic != kLabelMagic) {
        throw std::runtime_error(path + ": not a label file (magic " +
                                 std::to_string(magic) + ")");
    }
    const std::uint32_t count = in.read_u32_be();
    std::vector<int> labels(count);
    for (auto &label : labels) {
        std::uint8_t b;
        in.read_bytes(&b, 1);
        if (b > 9) {
            throw std::runtime_error(path + ": label out of range (" +
                                     std::to_string(int{b}) + ")");
        }
        label = b;
    }
    if (!in.at_eof()) {
        throw std::runtime_error(path + ": trailing bytes after label data");
    }
    return labels;
}

void write_idx_images(const std::string &path,
                      const std::vector<std::vector<std::uint8_t>> &images,
                      int rows, int cols) {
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) {
        throw std::runtime_error("cannot write " + path);
    }
    try {
        write_u32_be(f, kImageMagic);
        write_u32_be(f, static_cast<std::uint32_t>(images.size()));
        write_u32_be(f, static_cast<std::uint32_t>(rows));
        write_u32_be(f, static_cast<std::uint32_t>(cols));
        const std::size_t len = static_cast<std::size_t>(rows) * cols;
        for (const auto &img : images) {
            if (img.size() != len) {
                throw std::runtime_error("write_idx_images: image size mismatch");
            }
            if (std::fwrite(img.data(), 1, len, f) != len) {
                throw std::runtime_error("IDX write failed");
            }
        }
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
}

void write_idx_labels(const std::string &path, const std::vector<int> &labels) {
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) {
        throw std::runtime_error("cannot write " + path);
    }
    try {
        write_u32_be(f, kLabelMagic);
        write_u32_be(f, static_cast<std::uint32_t>(labels.size()));
        for (const int label : labels) {
            const auto b = static_cast<std::uint8_t>(label);
            if (std::fwrite(&b, 1, 1, f) != 1) {
                throw std::runtime_error("IDX write failed");
            }
        }
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
}

namespace {

void append_pair(Dataset &out, const std::string &images_path,
                 const std::string &labels_path) {
    int rows = 0;
    int cols = 0;
    auto images = read_idx_images(images_path, rows, cols);
    const auto labels = read_idx_labels(labels_path);
    if (images.size() != labels.size()) {
        throw std::runtime_error("image/label count mismatch: " + images_path);
    }
    if (out.rows == 0) {
        out.rows = rows;
        out.cols = cols;
    } else if (out.rows != rows || out.cols != cols) {
        throw std::runtime_error("image dimensions differ between files");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        out.samples.push_back(
            {std::move(images[i]), labels[i], labels[i]});
    }
}

bool pair_exists(const std::string &stem_images, const std::string &stem_labels) {
    const auto any = [](const std::string &p) {
        return std::filesystem::exists(p) || std::filesystem::exists(p + ".gz");
    };
    return any(stem_images) && any(stem_labels);
}

} // namespace

Dataset load_dataset(const std::string &data_dir) {
    Dataset out;
    const std::string train_images = data_dir + "/train-images-idx3-ubyte";
    const std::string train_labels = data_dir + "/train-labels-idx1-ubyte";
    if (!pair_exists(train_images, train_labels)) {
        throw std::runtime_error(
            "no MNIST files in '" + data_dir +
            "' (expected train-images-idx3-ubyte / train-labels-idx1-ubyte)");
    }
    append_pair(out, train_images, train_labels);
    out.images_path = train_images;
    out.labels_path = train_labels;

    const std::string test_images = data_dir + "/t10k-images-idx3-ubyte";
    const std::string test_labels = data_dir + "/t10k-labels-idx1-ubyte";
    if (pair_exists(test_images, test_labels)) {
        append_pair(out, test_images, test_labels);
    }
    return out;
}

std::pair<Dataset, Dataset> subset(const Dataset &pool,
                                   const std::vector<int> &classes,
                                   int per_class_train, int per_class_test,
                                   std::uint64_t seed) {
    if (classes.empty()) {
        throw std::invalid_argument("subset: no classes requested");
    }
    std::vector<int> ordered = classes;
    std::sort(ordered.begin(), ordered.end());
    if (std::adjacent_find(ordered.begin(), ordered.end()) != ordered.end()) {
        throw std::invalid_argument("subset: duplicate class");
    }

    Dataset train;
    Dataset test;
    for (Dataset *d : {&train, &test}) {
        d->rows = pool.rows;
        d->cols = pool.cols;
        d->class_subset = ordered;
        d->images_path = pool.images_path;
        d->labels_path = pool.labels_path;
        d->subset_seed = seed;
    }

    for (std::size_t k = 0; k < ordered.size(); ++k) {
        const int cls = ordered[k];
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < pool.samples.size(); ++i) {
            if (pool.samples[i].label == cls) {
                indices.push_back(i);
            }
        }
        const std::size_t needed =
            static_cast<std::size_t>(per_class_train) + per_class_test;
        if (indices.size() < needed) {
            throw std::runtime_error(
                "subset: class " + std::to_string(cls) + " has only " +
                std::to_string(indices.size()) + " samples, need " +
                std::to_string(needed));
        }
        Rng rng(derive_seed(seed, "subset/class" + std::to_string(cls)));
        rng.shuffle(indices);
        for (std::size_t i = 0; i < needed; ++i) {
            Sample s = pool.samples[indices[i]];
            s.remapped_label = static_cast<int>(k);
            (i < static_cast<std::size_t>(per_class_train) ? train : test)
                .samples.push_back(std::move(s));
        }
    }
    return {std::move(train), std::move(test)};
}

RealMatrix to_real_matrix(const Sample &sample, int rows, int cols) {
    if (sample.pixels.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("to_real_matrix: pixel count mismatch");
    }
    RealMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = sample.pixels[static_cast<std::size_t>(r) * cols + c] / 255.0;
        }
    }
    return m;
}

} // namespace qconv
