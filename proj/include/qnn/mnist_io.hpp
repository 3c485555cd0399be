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
/**
 * @file
 * IDX container parsing (the MNIST distribution format) and dataset assembly.
 *
 * Image files: big-endian magic 0x00000803, u32 count/rows/cols, then
 * count*rows*cols pixel bytes. Label files: big-endian magic 0x00000801,
 * u32 count, then count label bytes in [0, 9]. Gzip-compressed files are
 * detected by their leading bytes and inflated transparently.
 */
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qnn/encoder.hpp"

namespace qnn::mnist {

/// Parse failure with the offending byte offset in the message.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t offset)
        : std::runtime_error("IDX parse error at byte " + std::to_string(offset) + ": " +
                             what),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

/// Labeled image set; images[i] is labeled labels[i].
struct RawDataset {
    std::vector<Image> images;
    std::vector<int> labels;

    std::size_t size() const { return images.size(); }
};

/// Decode an IDX image payload. Pixels are scaled to [0, 1] by 1/255.
std::vector<Image> parse_idx_images(const std::vector<std::uint8_t> &bytes);

/// Decode an IDX label payload; every label must be in [0, 9].
std::vector<int> parse_idx_labels(const std::vector<std::uint8_t> &bytes);

/// Encode images/labels back to IDX bytes (pixels re-quantized by *255).
std::vector<std::uint8_t> write_idx_images(const std::vector<Image> &images);
std::vector<std::uint8_t> write_idx_labels(const std::vector<int> &labels);

/// Read a file, inflating it first when it carries the gzip magic.
std::vector<std::uint8_t> read_file_maybe_gzip(const std::string &path);

/// Load and pair an image file with a label file; counts must match.
RawDataset load_dataset(const std::string &images_path, const std::string &labels_path);

/// Block-mean pooling by `factor` along both axes; factor must divide both
/// dimensions.
Image downscale(const Image &img, int factor);

/**
 * @brief Stable-order subset with at most `limit_per_class` samples of each
 * requested class.
 *
 * A limit of 0 produces an empty dataset; omit the argument for no limit.
 */
RawDataset filter_classes(const RawDataset &ds, const std::set<int> &classes,
                          std::size_t limit_per_class = SIZE_MAX);

} // namespace qnn::mnist
