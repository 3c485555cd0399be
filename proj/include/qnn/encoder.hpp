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
 * Classical-to-quantum interface: images become amplitude-encoded states,
 * class labels become target basis states, and readout maps measurement
 * probabilities back to a class distribution.
 */
#pragma once

#include <vector>

#include "qnn/statevector.hpp"

namespace qnn {

/// Grayscale image, row-major, intensities in [0, 1].
struct Image {
    int width{0};
    int height{0};
    std::vector<double> pixels;

    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

/// Validates dimensions, pixel count and the [0, 1] range.
void check_image(const Image &img);

/// Class label together with its target state |y> = |class_index>.
struct LabelState {
    int class_index;
    Statevector target;
};

/**
 * @brief Center `img` on a larger all-zero canvas.
 *
 * The source is placed at offset floor((out - in) / 2) on each axis. The
 * output pixel count must be a power of two so the result stays encodable.
 */
Image zero_pad(const Image &img, int out_w, int out_h);

/**
 * @brief Amplitude-encode an image: amp_j = pixel_j / ||pixels||_2.
 *
 * Pixel count must be 2^N; an all-zero image cannot be normalized and is
 * rejected.
 */
Statevector amplitude_encode(const Image &img);

/// Target state for a class: |class_index> on `num_qubits` qubits.
/// Requires 0 <= class_index < 10 and 2^num_qubits >= 10.
LabelState encode_label(int class_index, int num_qubits);

/**
 * @brief Class distribution read from a state.
 *
 * Takes the probabilities of the first `num_classes` basis states and
 * renormalizes them to sum 1. If their total mass is below 1e-12 the uniform
 * distribution is returned.
 */
std::vector<double> readout_distribution(const Statevector &state, int num_classes);

/// Index of the largest entry; ties break toward the lowest index.
int argmax_class(const std::vector<double> &distribution);

} // namespace qnn
