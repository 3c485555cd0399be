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

#include "qnn/encoder.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qnn {

void check_image(const Image &img) {
    if (img.width < 1 || img.height < 1) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (img.pixels.size() !=
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height)) {
        throw std::invalid_argument("pixel count does not match width*height");
    }
    for (const double p : img.pixels) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("pixel intensity outside [0, 1]");
        }
    }
}

Image zero_pad(const Image &img, int out_w, int out_h) {
    check_image(img);
    if (out_w < img.width || out_h < img.height) {
        throw std::invalid_argument("zero_pad target smaller than source");
    }
    const auto out_pixels =
        static_cast<std::size_t>(out_w) * static_cast<std::size_t>(out_h);
    if (!std::has_single_bit(out_pixels)) {
        throw std::invalid_argument("padded pixel count must be a power of two, got " +
                                    std::to_string(out_pixels));
    }
    const int off_x = (out_w - img.width) / 2;
    const int off_y = (out_h - img.height) / 2;
    Image out{out_w, out_h, std::vector<double>(out_pixels, 0.0)};
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            out.pixels[static_cast<std::size_t>(r + off_y) * out_w + (c + off_x)] =
                img.at(r, c);
        }
    }
    return out;
}

Statevector amplitude_encode(const Image &img) {
    check_image(img);
    if (!std::has_single_bit(img.pixels.size())) {
        throw std::invalid_argument("pixel count must be 2^N to amplitude-encode, got " +
                                    std::to_string(img.pixels.size()));
    }
    double norm_sq = 0.0;
    for (const double p : img.pixels) {
        norm_sq += p * p;
    }
    if (norm_sq <= 0.0) {
        throw std::invalid_argument("all-zero image cannot be amplitude-encoded");
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    std::vector<Complex> amps(img.pixels.size());
    for (std::size_t j = 0; j < amps.size(); ++j) {
        amps[j] = Complex{img.pixels[j] * inv_norm, 0.0};
    }
    return Statevector::from_amplitudes(std::move(amps));
}

LabelState encode_label(int class_index, int num_qubits) {
    if (class_index < 0 || class_index >= 10) {
        throw std::out_of_range("class index " + std::to_string(class_index) +
                                " outside [0, 10)");
    }
    if (num_qubits < 1 || (std::size_t{1} << num_qubits) < 10) {
        throw std::invalid_argument("register too small to address 10 classes");
    }
    return LabelState{class_index,
                      Statevector::basis_state(num_qubits, static_cast<std::size_t>(class_index))};
}

std::vector<double> readout_distribution(const Statevector &state, int num_classes) {
    if (num_classes < 1 || static_cast<std::size_t>(num_classes) > state.size()) {
        throw std::invalid_argument("num_classes must be in [1, 2^num_qubits]");
    }
    std::vector<double> dist(static_cast<std::size_t>(num_classes));
    double total = 0.0;
    for (int i = 0; i < num_classes; ++i) {
        dist[i] = std::norm(state[static_cast<std::size_t>(i)]);
        total += dist[i];
    }
    if (total < 1e-12) {
        const double uniform = 1.0 / num_classes;
        for (auto &d : dist) {
            d = uniform;
        }
        return dist;
    }
    for (auto &d : dist) {
        d /= total;
    }
    return dist;
}

int argmax_class(const std::vector<double> &distribution) {
    if (distribution.empty()) {
        throw std::invalid_argument("argmax of empty distribution");
    }
    int best = 0;
    for (int i = 1; i < static_cast<int>(distribution.size()); ++i) {
        if (distribution[static_cast<std::size_t>(i)] > distribution[static_cast<std::size_t>(best)]) {
            best = i;
        }
    }
    return best;
}

} // namespace qnn
