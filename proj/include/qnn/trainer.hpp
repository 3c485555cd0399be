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
 * Mini-batch gradient descent over encoded digit datasets: seeded shuffling,
 * per-epoch learning-rate decay, metrics and best-checkpoint retention.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnn/loss.hpp"
#include "qnn/mnist_io.hpp"

namespace qnn {

struct TrainConfig {
    double learning_rate{0.03};
    double lr_decay{0.99};
    int batch_size{10};
    int epochs{120};
    std::uint64_t seed{1};
    LossKind loss_kind{LossKind::ProbMse};
    GradEngine grad_engine{GradEngine::ParamShift};
    double dt{1.0};
    double fd_step{1e-5};
    int threads{0}; ///< worker cap; 0 = hardware default

    void check() const;
};

struct EpochMetrics {
    int epoch{0};
    double mean_loss{0.0};
    double train_accuracy{0.0};
    double test_accuracy{0.0};
    double learning_rate{0.0};
    double wall_time_s{0.0};
};

/// Amplitude-encoded sample with its target label state.
struct EncodedSample {
    Statevector input;
    LabelState label;
};

struct EncodedDataset {
    int num_qubits{0};
    std::vector<EncodedSample> samples;

    std::size_t size() const { return samples.size(); }
};

/**
 * @brief Preprocess a raw dataset for the circuit: zero-pad each image to
 * the next power-of-two square, block-mean downscale, amplitude-encode.
 *
 * All images must agree on dimensions. 28x28 inputs pad to 32x32, giving
 * 10 qubits at factor 1, 8 at factor 2, 6 at factor 4.
 */
EncodedDataset encode_dataset(const mnist::RawDataset &ds, int downscale_factor);

/// Thrown when a non-finite loss or gradient stops a run.
class TrainingDiverged : public std::runtime_error {
  public:
    TrainingDiverged(int epoch, std::size_t batch_index)
        : std::runtime_error("non-finite loss in epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(batch_index)),
          epoch_(epoch), batch_index_(batch_index) {}

    int epoch() const { return epoch_; }
    std::size_t batch_index() const { return batch_index_; }

  private:
    int epoch_;
    std::size_t batch_index_;
};

/// One gradient-descent update: w_k - eta * g_k.
Weights sgd_step(const Weights &w, const Gradient &g, double eta);

/// Mean of per-sample gradients over `indices`, evaluated in parallel
/// against a read-only weight snapshot. Also returns the mean loss.
struct BatchGrad {
    Gradient grad;
    double mean_loss;
};
BatchGrad batch_gradient(const CircuitSpec &spec, const Weights &w,
                         const EncodedDataset &data, std::span<const std::size_t> indices,
                         const TrainConfig &config);

/// Fraction of samples whose argmax readout matches the label.
double evaluate(const CircuitSpec &spec, const Weights &w, const EncodedDataset &data,
                int threads = 0);

struct TrainResult {
    Weights final_weights;
    Weights best_weights;      ///< highest test accuracy seen
    int best_epoch{0};
    double best_test_accuracy{0.0};
    /// First epoch whose test accuracy is within 0.5 percentage points of
    /// the run's best.
    int convergence_epoch{0};
    std::vector<EpochMetrics> metrics;
};

/**
 * @brief Run mini-batch gradient descent.
 *
 * Deterministic given the seed: weight init, per-epoch reshuffling and the
 * sequential batch reduction are all pinned. The learning rate is multiplied
 * by lr_decay after every epoch. Throws TrainingDiverged on a non-finite
 * loss.
 */
TrainResult train(const CircuitSpec &spec, const EncodedDataset &train_set,
                  const EncodedDataset &test_set, const TrainConfig &config);

/// CSV rows "epoch,mean_loss,train_acc,test_acc,lr,wall_time_s" with header.
void write_metrics_csv(const std::vector<EpochMetrics> &metrics, std::ostream &out);
void write_metrics_csv(const std::vector<EpochMetrics> &metrics, const std::string &path);

std::string to_string(LossKind kind);
std::string to_string(GradEngine engine);
LossKind loss_kind_from_string(const std::string &name);
GradEngine grad_engine_from_string(const std::string &name);

} // namespace qnn
