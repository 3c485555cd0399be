// Copyright 2026 The qnnsim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnn/mnist_io.hpp"

#include <fstream>
#include <limits>

#include <zlib.h>

namespace qnn::mnist {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

class Reader {
  public:
    explicit Reader(const std::vector<std::uint8_t> &bytes) : bytes_(bytes) {}

    std::uint32_t read_u32_be(const char *what) {
        if (bytes_.size() - pos_ < 4) {
            throw ParseError(std::string("truncated while reading ") + what, pos_);
        }
        const std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) |
                                (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                                (std::uint32_t{bytes_[pos_ + 2]} << 8) |
                                std::uint32_t{bytes_[pos_ + 3]};
        pos_ += 4;
        return v;
    }

    std::uint8_t read_u8(const char *what) {
        if (pos_ >= bytes_.size()) {
            throw ParseError(std::string("truncated while reading ") + what, pos_);
        }
        return bytes_[pos_++];
    }

    void expect_payload(std::uint64_t remaining, const char *what) const {
        if (bytes_.size() - pos_ < remaining) {
            throw ParseError("declared " + std::string(what) + " payload of " +
                                 std::to_string(remaining) + " bytes but only " +
                                 std::to_string(bytes_.size() - pos_) + " remain",
                             pos_);
        }
    }

    void expect_end() const {
        if (pos_ != bytes_.size()) {
            throw ParseError(std::to_string(bytes_.size() - pos_) +
                                 " trailing bytes after declared payload",
                             pos_);
        }
    }

    std::size_t pos() const { return pos_; }

  private:
    const std::vector<std::uint8_t> &bytes_;
    std::size_t pos_{0};
};

} // namespace

std::vector<Image> parse_idx_images(const std::vector<std::uint8_t> &bytes) {
    Reader r(bytes);
    const std::uint32_t magic = r.read_u32_be("magic");
    if (magic != kImageMagic) {
        throw ParseError("bad image magic " + std::to_string(magic) + " (want 2051)", 0);
    }
    const std::uint32_t count = r.read_u32_be("image count");
    const std::uint32_t rows = r.read_u32_be("row count");
    const std::uint32_t cols = r.read_u32_be("column count");
    if (count > 0 && (rows == 0 || cols == 0)) {
        throw ParseError("zero image dimensions", 4);
    }
    if (rows > 4096 || cols > 4096) {
        throw ParseError("implausible image dimensions " + std::to_string(rows) + "x" +
                             std::to_string(cols),
                         8);
    }
    const std::uint64_t payload = std::uint64_t{count} * rows * cols;
    r.expect_payload(payload, "image");

    std::vector<Image> images;
    images.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Image img{static_cast<int>(cols), static_cast<int>(rows),
                  std::vector<double>(std::size_t{rows} * cols)};
        for (auto &p : img.pixels) {
            p = r.read_u8("pixel") / 255.0;
        }
        images.push_back(std::move(img));
    }
    r.expect_end();
    return images;
}

std::vector<int> parse_idx_labels(const std::vector<std::uint8_t> &bytes) {
    Reader r(bytes);
    const std::uint32_t magic = r.read_u32_be("magic");
    if (magic != kLabelMagic) {
        throw ParseError("bad label magic " + std::to_string(magic) + " (want 2049)", 0);
    }
    const std::uint32_t count = r.read_u32_be("label count");
    r.expect_payload(count, "label");

    std::vector<int> labels;
    labels.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t at = r.pos();
        const std::uint8_t v = r.read_u8("label");
        if (v > 9) {
            throw ParseError("label value " + std::to_string(v) + " outside [0, 9]", at);
        }
        labels.push_back(v);
    }
    r.expect_end();
    return labels;
}

namespace {

void push_u32_be(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

} // namespace

std::vector<std::uint8_t> write_idx_images(const std::vector<Image> &images) {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    if (!images.empty()) {
        check_image(images.front());
        rows = static_cast<std::uint32_t>(images.front().height);
        cols = static_cast<std::uint32_t>(images.front().width);
    }
    std::vector<std::uint8_t> out;
    push_u32_be(out, kImageMagic);
    push_u32_be(out, static_cast<std::uint32_t>(images.size()));
    push_u32_be(out, rows);
    push_u32_be(out, cols);
    for (const auto &img : images) {
        check_image(img);
        if (static_cast<std::uint32_t>(img.height) != rows ||
            static_cast<std::uint32_t>(img.width) != cols) {
            throw std::invalid_argument("all images in an IDX file must share dimensions");
        }
        for (const double p : img.pixels) {
            out.push_back(static_cast<std::uint8_t>(std::lround(p * 255.0)));
        }
    }
    return out;
}

std::vector<std::uint8_t> write_idx_labels(const std::vector<int> &labels) {
    std::vector<std::uint8_t> out;
    push_u32_be(out, kLabelMagic);
    push_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    for (const int l : labels) {
        if (l < 0 || l > 9) {
            throw std::invalid_argument("label outside [0, 9]");
        }
        out.push_back(static_cast<std::uint8_t>(l));
    }
    return out;
}

namespace {

std::vector<std::uint8_t> gzip_inflate(const std::vector<std::uint8_t> &bytes,
                                       const std::string &path) {
    z_stream zs{};
    // 15 + 16 selects the gzip wrapper.
    if (inflateInit2(&zs, 15 + 16) != Z_OK) {
        throw std::runtime_error("zlib init failed for " + path);
    }
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> chunk(1 << 16);
    zs.next_in = const_cast<Bytef *>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        zs.next_out = chunk.data();
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("corrupt gzip stream in " + path);
        }
        out.insert(out.end(), chunk.begin(), chunk.begin() + (chunk.size() - zs.avail_out));
    } while (rc != Z_STREAM_END);
    const bool fully_consumed = zs.avail_in == 0;
    inflateEnd(&zs);
    if (!fully_consumed) {
        throw std::runtime_error("trailing bytes after gzip stream in " + path);
    }
    return out;
}

} // namespace

std::vector<std::uint8_t> read_file_maybe_gzip(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        return gzip_inflate(bytes, path);
    }
    return bytes;
}

RawDataset load_dataset(const std::string &images_path, const std::string &labels_path) {
    RawDataset ds;
    ds.images = parse_idx_images(read_file_maybe_gzip(images_path));
    ds.labels = parse_idx_labels(read_file_maybe_gzip(labels_path));
    if (ds.images.size() != ds.labels.size()) {
        throw std::runtime_error("image/label count mismatch: " +
                                 std::to_string(ds.images.size()) + " images vs " +
                                 std::to_string(ds.labels.size()) + " labels");
    }
    return ds;
}

Image downscale(const Image &img, int factor) {
    check_image(img);
    if (factor < 1) {
        throw std::invalid_argument("downscale factor must be >= 1");
    }
    if (img.width % factor != 0 || img.height % factor != 0) {
        throw std::invalid_argument("downscale factor " + std::to_string(factor) +
                                    " does not divide " + std::to_string(img.width) + "x" +
                                    std::to_string(img.height));
    }
    const int out_w = img.width / factor;
    const int out_h = img.height / factor;
    Image out{out_w, out_h, std::vector<double>(static_cast<std::size_t>(out_w) * out_h)};
    const double inv_block = 1.0 / (static_cast<double>(factor) * factor);
    for (int r = 0; r < out_h; ++r) {
        for (int c = 0; c < out_w; ++c) {
            double acc = 0.0;
            for (int dr = 0; dr < factor; ++dr) {
                for (int dc = 0; dc < factor; ++dc) {
                    acc += img.at(r * factor + dr, c * factor + dc);
                }
            }
            out.pixels[static_cast<std::size_t>(r) * out_w + c] = acc * inv_block;
        }
    }
    return out;
}

RawDataset filter_classes(const RawDataset &ds, const std::set<int> &classes,
                          std::size_t limit_per_class) {
    if (classes.empty()) {
        throw std::invalid_argument("class filter must name at least one class");
    }
    if (ds.images.size() != ds.labels.size()) {
        throw std::invalid_argument("dataset images/labels length mismatch");
    }
    std::vector<std::size_t> taken(10, 0);
    RawDataset out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const int label = ds.labels[i];
        if (!classes.contains(label)) {
            continue;
        }
        auto &count = taken[static_cast<std::size_t>(label)];
        if (count >= limit_per_class) {
            continue;
        }
        ++count;
        out.images.push_back(ds.images[i]);
        out.labels.push_back(label);
    }
    return out;
}

} // namespace qnn::mnist
