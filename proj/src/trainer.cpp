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

#include "qnn/trainer.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include <omp.h>

#include "qnn/rng.hpp"

namespace qnn {

void TrainConfig::check() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
        throw std::invalid_argument("lr decay must be in (0, 1]");
    }
    if (batch_size < 1) {
        throw std::invalid_argument("batch size must be >= 1");
    }
    if (epochs < 1) {
        throw std::invalid_argument("epoch count must be >= 1");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive and finite");
    }
    if (!(fd_step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    if (threads < 0) {
        throw std::invalid_argument("thread cap must be >= 0");
    }
}

EncodedDataset encode_dataset(const mnist::RawDataset &ds, int downscale_factor) {
    if (ds.images.size() != ds.labels.size()) {
        throw std::invalid_argument("dataset images/labels length mismatch");
    }
    EncodedDataset out;
    out.samples.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const Image &img = ds.images[i];
        int side = std::max(img.width, img.height);
        side = static_cast<int>(std::bit_ceil(static_cast<unsigned>(side)));
        Image padded = zero_pad(img, side, side);
        if (downscale_factor > 1) {
            padded = mnist::downscale(padded, downscale_factor);
        }
        Statevector encoded = amplitude_encode(padded);
        if (out.num_qubits == 0) {
            out.num_qubits = encoded.num_qubits();
        } else if (encoded.num_qubits() != out.num_qubits) {
            throw std::invalid_argument("inconsistent image dimensions in dataset");
        }
        LabelState label = encode_label(ds.labels[i], encoded.num_qubits());
        out.samples.push_back({std::move(encoded), std::move(label)});
    }
    return out;
}

Weights sgd_step(const Weights &w, const Gradient &g, double eta) {
    if (w.size() != g.size()) {
        throw std::invalid_argument("weight/gradient length mismatch");
    }
    if (!(eta > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    Weights out = w;
    for (std::size_t k = 0; k < w.size(); ++k) {
        out[k] = w[k] - eta * g[k];
    }
    return out;
}

namespace {

int resolve_threads(int requested) {
    // Cap at the hardware count; oversubscribed OpenMP teams spin-wait.
    const int hw = omp_get_max_threads();
    return requested > 0 ? std::min(requested, hw) : hw;
}

} // namespace

BatchGrad batch_gradient(const CircuitSpec &spec, const Weights &w,
                         const EncodedDataset &data, std::span<const std::size_t> indices,
                         const TrainConfig &config) {
    if (indices.empty()) {
        throw std::invalid_argument("empty batch");
    }
    const std::size_t n = indices.size();
    std::vector<Gradient> grads(n);
    std::vector<double> losses(n);

    // Per-sample slots, reduced sequentially afterwards, keep the result
    // independent of thread scheduling.
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(config.threads))
    for (std::size_t i = 0; i < n; ++i) {
        const EncodedSample &sample = data.samples[indices[i]];
        losses[i] = sample_loss(spec, w, sample.input, sample.label, config.loss_kind);
        grads[i] = sample_grad(spec, w, sample.input, sample.label, config.loss_kind,
                               config.grad_engine, config.fd_step);
    }

    BatchGrad out;
    out.grad.values.assign(spec.num_params, 0.0);
    double loss_acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        loss_acc += losses[i];
        for (std::size_t k = 0; k < spec.num_params; ++k) {
            out.grad[k] += grads[i][k];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < spec.num_params; ++k) {
        out.grad[k] *= inv_n;
    }
    out.mean_loss = loss_acc * inv_n;
    return out;
}

double evaluate(const CircuitSpec &spec, const Weights &w, const EncodedDataset &data,
                int threads) {
    if (data.samples.empty()) {
        throw std::invalid_argument("cannot evaluate on an empty dataset");
    }
    const std::size_t n = data.size();
    std::vector<unsigned char> correct(n, 0);
    // Registers below 4 qubits cannot address all 10 classes; clamp the
    // readout window so toy circuits stay evaluable.
    const int classes = static_cast<int>(
        std::min<std::size_t>(kNumClasses, std::size_t{1} << spec.num_qubits));
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
    for (std::size_t i = 0; i < n; ++i) {
        const EncodedSample &sample = data.samples[i];
        const Statevector evolved = forward(spec, w, sample.input);
        const int predicted = argmax_class(readout_distribution(evolved, classes));
        correct[i] = predicted == sample.label.class_index ? 1 : 0;
    }
    const auto hits = std::accumulate(correct.begin(), correct.end(), std::size_t{0});
    return static_cast<double>(hits) / static_cast<double>(n);
}

TrainResult train(const CircuitSpec &spec, const EncodedDataset &train_set,
                  const EncodedDataset &test_set, const TrainConfig &config) {
    config.check();
    if (train_set.samples.empty()) {
        throw std::invalid_argument("training dataset is empty");
    }
    if (test_set.samples.empty()) {
        throw std::invalid_argument("test dataset is empty");
    }
    if (train_set.num_qubits != spec.num_qubits || test_set.num_qubits != spec.num_qubits) {
        throw std::invalid_argument("dataset encoded on " +
                                    std::to_string(train_set.num_qubits) +
                                    " qubits, circuit expects " +
                                    std::to_string(spec.num_qubits));
    }

    TrainResult result;
    Weights w = init_weights(spec, config.seed);
    // Decorrelated stream for shuffling so it does not replay the init draws.
    Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double eta = config.learning_rate;
    result.best_test_accuracy = -1.0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        shuffle_rng.shuffle(order);

        double loss_acc = 0.0;
        const auto batch_size = static_cast<std::size_t>(config.batch_size);
        for (std::size_t start = 0, batch_index = 0; start < order.size();
             start += batch_size, ++batch_index) {
            const std::size_t len = std::min(batch_size, order.size() - start);
            const BatchGrad bg = batch_gradient(
                spec, w, train_set, std::span(order).subspan(start, len), config);
            bool finite = std::isfinite(bg.mean_loss);
            for (std::size_t k = 0; finite && k < bg.grad.size(); ++k) {
                finite = std::isfinite(bg.grad[k]);
            }
            if (!finite) {
                throw TrainingDiverged(epoch, batch_index);
            }
            // Partial final batches contribute with their true size.
            loss_acc += bg.mean_loss * static_cast<double>(len);
            w = sgd_step(w, bg.grad, eta);
            for (const double v : w.values) {
                if (!std::isfinite(v)) {
                    throw TrainingDiverged(epoch, batch_index);
                }
            }
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.mean_loss = loss_acc / static_cast<double>(train_set.size());
        m.train_accuracy = evaluate(spec, w, train_set, config.threads);
        m.test_accuracy = evaluate(spec, w, test_set, config.threads);
        m.learning_rate = eta;
        m.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.metrics.push_back(m);

        if (m.test_accuracy > result.best_test_accuracy) {
            result.best_test_accuracy = m.test_accuracy;
            result.best_weights = w;
            result.best_epoch = epoch;
        }
        eta *= config.lr_decay;
    }
    result.final_weights = std::move(w);
    for (const auto &m : result.metrics) {
        if (m.test_accuracy >= result.best_test_accuracy - 0.005) {
            result.convergence_epoch = m.epoch;
            break;
        }
    }
    return result;
}

void write_metrics_csv(const std::vector<EpochMetrics> &metrics, std::ostream &out) {
    out << "epoch,mean_loss,train_acc,test_acc,lr,wall_time_s\n";
    char buf[256];
    for (const auto &m : metrics) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.6f\n", m.epoch,
                      m.mean_loss, m.train_accuracy, m.test_accuracy, m.learning_rate,
                      m.wall_time_s);
        out << buf;
    }
    if (!out) {
        throw std::runtime_error("failed to write metrics CSV");
    }
}

void write_metrics_csv(const std::vector<EpochMetrics> &metrics, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_metrics_csv(metrics, out);
}

std::string to_string(LossKind kind) {
    return kind == LossKind::Fidelity ? "fidelity" : "probmse";
}

std::string to_string(GradEngine engine) {
    switch (engine) {
    case GradEngine::Analytic:
        return "analytic";
    case GradEngine::ParamShift:
        return "shift";
    case GradEngine::FiniteDiff:
        return "fd";
    }
    return "?";
}

LossKind loss_kind_from_string(const std::string &name) {
    if (name == "fidelity") {
        return LossKind::Fidelity;
    }
    if (name == "probmse") {
        return LossKind::ProbMse;
    }
    throw std::invalid_argument("unknown loss '" + name + "' (want fidelity|probmse)");
}

GradEngine grad_engine_from_string(const std::string &name) {
    if (name == "analytic") {
        return GradEngine::Analytic;
    }
    if (name == "shift") {
        return GradEngine::ParamShift;
    }
    if (name == "fd") {
        return GradEngine::FiniteDiff;
    }
    throw std::invalid_argument("unknown gradient engine '" + name +
                                "' (want analytic|shift|fd)");
}

} // namespace qnn
