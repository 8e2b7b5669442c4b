#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quanv/rng.hpp"

namespace quanv {

/// Grayscale image with pixels already normalized to [-1, 1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> pixels; // row-major

    double at(int r, int c) const {
        return pixels[static_cast<std::size_t>(r) * width + c];
    }
};

struct Dataset {
    int height = 0;
    int width = 0;
    int n_classes = 0;
    std::vector<Image> train_images;
    std::vector<int> train_labels;
    std::vector<Image> val_images;
    std::vector<int> val_labels;
};

/// On-disk packed form: raw unsigned 8-bit pixels and labels plus a text
/// `meta` file. This is what the converter emits and the loader ingests.
struct RawDataset {
    int height = 0;
    int width = 0;
    int n_classes = 0;
    std::vector<std::uint8_t> train_pixels; // image after image, row-major
    std::vector<std::uint8_t> train_labels;
    std::vector<std::uint8_t> val_pixels;
    std::vector<std::uint8_t> val_labels;
};

namespace detail {

inline std::vector<std::uint8_t> read_binary(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + p.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_binary(const std::filesystem::path& p,
                         const std::vector<std::uint8_t>& data) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

inline double normalize_pixel(std::uint8_t p) {
    return 2.0 * static_cast<double>(p) / 255.0 - 1.0;
}

inline std::vector<Image> unpack_images(const std::vector<std::uint8_t>& pixels,
                                        int h, int w, std::size_t count) {
    const std::size_t per_image = static_cast<std::size_t>(h) * w;
    if (pixels.size() != per_image * count) {
        throw std::runtime_error("pixel payload size does not match meta counts");
    }
    std::vector<Image> images(count);
    for (std::size_t i = 0; i < count; ++i) {
        images[i].height = h;
        images[i].width = w;
        images[i].pixels.resize(per_image);
        for (std::size_t j = 0; j < per_image; ++j) {
            images[i].pixels[j] = normalize_pixel(pixels[i * per_image + j]);
        }
    }
    return images;
}

} // namespace detail

inline void save_raw_dataset(const RawDataset& raw,
                             const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::size_t per_image = static_cast<std::size_t>(raw.height) * raw.width;
    std::ofstream meta(dir / "meta");
    if (!meta) {
        throw std::runtime_error("cannot write " + (dir / "meta").string());
    }
    meta << "height " << raw.height << "\n"
         << "width " << raw.width << "\n"
         << "classes " << raw.n_classes << "\n"
         << "train " << raw.train_pixels.size() / per_image << "\n"
         << "val " << raw.val_pixels.size() / per_image << "\n";
    detail::write_binary(dir / "train.bin", raw.train_pixels);
    detail::write_binary(dir / "train.labels", raw.train_labels);
    detail::write_binary(dir / "val.bin", raw.val_pixels);
    detail::write_binary(dir / "val.labels", raw.val_labels);
}

inline Dataset dataset_from_raw(const RawDataset& raw) {
    Dataset ds;
    ds.height = raw.height;
    ds.width = raw.width;
    ds.n_classes = raw.n_classes;
    ds.train_images = detail::unpack_images(raw.train_pixels, raw.height,
                                            raw.width, raw.train_labels.size());
    ds.val_images = detail::unpack_images(raw.val_pixels, raw.height, raw.width,
                                          raw.val_labels.size());
    ds.train_labels.assign(raw.train_labels.begin(), raw.train_labels.end());
    ds.val_labels.assign(raw.val_labels.begin(), raw.val_labels.end());
    for (const int label : ds.train_labels) {
        if (label >= ds.n_classes) {
            throw std::runtime_error("label exceeds declared class count");
        }
    }
    return ds;
}

inline Dataset load_dataset(const std::filesystem::path& dir) {
    std::ifstream meta(dir / "meta");
    if (!meta) {
        throw std::runtime_error("cannot open " + (dir / "meta").string());
    }
    RawDataset raw;
    std::size_t n_train = 0;
    std::size_t n_val = 0;
    std::string key;
    while (meta >> key) {
        if (key == "height") {
            meta >> raw.height;
        } else if (key == "width") {
            meta >> raw.width;
        } else if (key == "classes") {
            meta >> raw.n_classes;
        } else if (key == "train") {
            meta >> n_train;
        } else if (key == "val") {
            meta >> n_val;
        } else {
            throw std::runtime_error("unknown meta key '" + key + "' in " +
                                     (dir / "meta").string());
        }
    }
    if (raw.height < 1 || raw.width < 1 || raw.n_classes < 2) {
        throw std::runtime_error("invalid meta in " + dir.string());
    }
    raw.train_pixels = detail::read_binary(dir / "train.bin");
    raw.train_labels = detail::read_binary(dir / "train.labels");
    raw.val_pixels = detail::read_binary(dir / "val.bin");
    raw.val_labels = detail::read_binary(dir / "val.labels");
    if (raw.train_labels.size() != n_train || raw.val_labels.size() != n_val) {
        throw std::runtime_error("label file size does not match meta counts");
    }
    return dataset_from_raw(raw);
}

/// Synthetic two-class set: class 0 = horizontal stripes, class 1 =
/// checkerboard, with per-image polarity flips and uniform pixel noise.
/// Deterministic in the seed.
inline RawDataset make_stripes_checkers(int n_train, int n_val, int height = 8,
                                        int width = 8, std::uint64_t seed = 1) {
    RawDataset raw;
    raw.height = height;
    raw.width = width;
    raw.n_classes = 2;
    Rng rng(seed);
    auto emit = [&](std::vector<std::uint8_t>& pixels,
                    std::vector<std::uint8_t>& labels, int count) {
        for (int i = 0; i < count; ++i) {
            const int label = static_cast<int>(rng.integer(2));
            const double polarity = rng.integer(2) == 0 ? 1.0 : -1.0;
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    const int parity = label == 0 ? r % 2 : (r + c) % 2;
                    double v = polarity * (parity == 0 ? 0.8 : -0.8);
                    v += rng.uniform(-0.15, 0.15);
                    v = std::min(1.0, std::max(-1.0, v));
                    pixels.push_back(
                        static_cast<std::uint8_t>(std::lround((v + 1.0) * 127.5)));
                }
            }
            labels.push_back(static_cast<std::uint8_t>(label));
        }
    };
    emit(raw.train_pixels, raw.train_labels, n_train);
    emit(raw.val_pixels, raw.val_labels, n_val);
    return raw;
}

/// Resolve a dataset reference: either a packed directory or a synthetic
/// URI of the form "synthetic:stripes[:n_train[:n_val[:seed]]]".
inline Dataset resolve_dataset(const std::string& ref) {
    if (ref.rfind("synthetic:", 0) == 0) {
        std::stringstream ss(ref.substr(std::string("synthetic:").size()));
        std::string kind;
        std::getline(ss, kind, ':');
        if (kind != "stripes") {
            throw std::runtime_error("unknown synthetic dataset '" + kind + "'");
        }
        int n_train = 200;
        int n_val = 50;
        std::uint64_t seed = 1;
        std::string tok;
        if (std::getline(ss, tok, ':')) n_train = std::stoi(tok);
        if (std::getline(ss, tok, ':')) n_val = std::stoi(tok);
        if (std::getline(ss, tok, ':')) seed = std::stoull(tok);
        return dataset_from_raw(make_stripes_checkers(n_train, n_val, 8, 8, seed));
    }
    return load_dataset(ref);
}

} // namespace quanv
