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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "json.hpp"

#include "qnn/rng.hpp"

namespace qnn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve_idx_file(const std::string &dir, const std::string &name) {
    const fs::path plain = fs::path(dir) / name;
    if (fs::exists(plain)) {
        return plain.string();
    }
    const fs::path gz = fs::path(dir) / (name + ".gz");
    if (fs::exists(gz)) {
        return gz.string();
    }
    throw std::runtime_error("missing data file " + plain.string() + "[.gz]");
}

std::set<int> effective_classes(const RunManifest &m) {
    if (!m.classes.empty()) {
        return m.classes;
    }
    return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
}

std::size_t cap_or_unlimited(std::size_t limit) {
    return limit == 0 ? SIZE_MAX : limit;
}

EncodedDataset load_split(const RunManifest &m, const std::string &images,
                          const std::string &labels, std::size_t per_class_cap) {
    auto raw = mnist::load_dataset(resolve_idx_file(m.data_dir, images),
                                   resolve_idx_file(m.data_dir, labels));
    raw = mnist::filter_classes(raw, effective_classes(m), cap_or_unlimited(per_class_cap));
    if (raw.size() == 0) {
        throw std::runtime_error("no samples left after class filtering");
    }
    return encode_dataset(raw, m.downscale);
}

void check_qubits(const RunManifest &m, const EncodedDataset &data) {
    if (m.qubits != 0 && m.qubits != data.num_qubits) {
        throw std::runtime_error("--qubits " + std::to_string(m.qubits) +
                                 " does not match the encoded data (" +
                                 std::to_string(data.num_qubits) +
                                 " qubits after padding/downscale)");
    }
}

json config_json(const TrainConfig &c) {
    return json{{"learning_rate", c.learning_rate},
                {"lr_decay", c.lr_decay},
                {"batch_size", c.batch_size},
                {"epochs", c.epochs},
                {"seed", c.seed},
                {"loss", to_string(c.loss_kind)},
                {"grad", to_string(c.grad_engine)},
                {"dt", c.dt},
                {"fd_step", c.fd_step},
                {"threads", c.threads}};
}

json manifest_json(const RunManifest &m) {
    return json{{"command", m.command},
                {"qubits", m.qubits},
                {"layers", m.layers},
                {"config", config_json(m.config)},
                {"data_dir", m.data_dir},
                {"classes", effective_classes(m)},
                {"limit", m.limit},
                {"limit_test", m.limit_test},
                {"downscale", m.downscale},
                {"split", m.split},
                {"images", m.images_path},
                {"labels", m.labels_path},
                {"out_dir", m.out_dir},
                {"checkpoint", m.checkpoint_path},
                {"instances", m.instances},
                {"threshold", m.threshold},
                {"corrupt_analytic", m.corrupt_analytic},
                {"bench_reps", m.bench_reps},
                {"dry_run", m.dry_run}};
}

CircuitSpec spec_from_checkpoint(const Checkpoint &ckpt) {
    return build_ansatz(ckpt.num_qubits, ckpt.num_layers, ckpt.dt);
}

/// Relative disagreement with an absolute floor of threshold*1e-3 per the
/// gradient contracts (1e-6 relative with a 1e-9 absolute floor).
double grad_disagreement(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}

} // namespace

int cmd_train(const RunManifest &manifest) {
    manifest.config.check();
    const auto train_set =
        load_split(manifest, "train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                   manifest.limit);
    const auto test_set =
        load_split(manifest, "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte",
                   manifest.limit_test != 0 ? manifest.limit_test : manifest.limit);
    check_qubits(manifest, train_set);
    if (test_set.num_qubits != train_set.num_qubits) {
        throw std::runtime_error("train and test splits disagree on register size");
    }

    const auto spec =
        build_ansatz(train_set.num_qubits, manifest.layers, manifest.config.dt);
    std::cout << "train: " << train_set.size() << " samples, test: " << test_set.size()
              << ", " << spec.num_qubits << " qubits, " << manifest.layers << " layers, "
              << spec.num_params << " parameters\n";

    if (manifest.dry_run) {
        std::cout << "dry run: configuration and data validated\n";
        return kExitOk;
    }

    fs::create_directories(manifest.out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    const TrainResult result = train(spec, train_set, test_set, manifest.config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path out(manifest.out_dir);
    write_metrics_csv(result.metrics, (out / "metrics.csv").string());
    save_checkpoint({spec.num_qubits, manifest.layers, manifest.config.dt,
                     manifest.config.seed, result.best_epoch, result.best_weights},
                    (out / "best.ckpt").string());
    save_checkpoint({spec.num_qubits, manifest.layers, manifest.config.dt,
                     manifest.config.seed, manifest.config.epochs - 1,
                     result.final_weights},
                    (out / "final.ckpt").string());

    const auto &last = result.metrics.back();
    json summary;
    summary["manifest"] = manifest_json(manifest);
    summary["result"] = {{"best_test_accuracy", result.best_test_accuracy},
                         {"best_epoch", result.best_epoch},
                         {"convergence_epoch", result.convergence_epoch},
                         {"final_train_accuracy", last.train_accuracy},
                         {"final_test_accuracy", last.test_accuracy},
                         {"final_mean_loss", last.mean_loss},
                         {"epochs_run", result.metrics.size()},
                         {"wall_time_s", wall}};
    summary["outputs"] = {{"metrics_csv", (out / "metrics.csv").string()},
                          {"best_checkpoint", (out / "best.ckpt").string()},
                          {"final_checkpoint", (out / "final.ckpt").string()}};
    std::ofstream sum(out / "summary.json");
    sum << summary.dump(2) << "\n";
    if (!sum) {
        throw std::runtime_error("failed to write summary.json");
    }

    std::cout << "best test accuracy " << result.best_test_accuracy << " at epoch "
              << result.best_epoch << "; outputs in " << manifest.out_dir << "\n";
    return kExitOk;
}

int cmd_eval(const RunManifest &manifest) {
    const Checkpoint ckpt = load_checkpoint(manifest.checkpoint_path);
    if (manifest.qubits != 0 && manifest.qubits != ckpt.num_qubits) {
        throw std::runtime_error("checkpoint has " + std::to_string(ckpt.num_qubits) +
                                 " qubits, --qubits says " +
                                 std::to_string(manifest.qubits));
    }
    if (manifest.layers != 0 && manifest.layers != ckpt.num_layers) {
        throw std::runtime_error("checkpoint has " + std::to_string(ckpt.num_layers) +
                                 " layers, --layers says " +
                                 std::to_string(manifest.layers));
    }

    const bool train_split = manifest.split == "train";
    if (!train_split && manifest.split != "test") {
        throw std::runtime_error("--split must be train or test");
    }
    const auto data = load_split(
        manifest, train_split ? "train-images-idx3-ubyte" : "t10k-images-idx3-ubyte",
        train_split ? "train-labels-idx1-ubyte" : "t10k-labels-idx1-ubyte",
        train_split ? manifest.limit : (manifest.limit_test != 0 ? manifest.limit_test
                                                                 : manifest.limit));
    if (data.num_qubits != ckpt.num_qubits) {
        throw std::runtime_error("checkpoint register (" +
                                 std::to_string(ckpt.num_qubits) +
                                 " qubits) does not match the encoded data (" +
                                 std::to_string(data.num_qubits) + ")");
    }

    const auto spec = spec_from_checkpoint(ckpt);
    const double accuracy = evaluate(spec, ckpt.weights, data, manifest.config.threads);

    json report;
    report["manifest"] = manifest_json(manifest);
    report["accuracy"] = accuracy;
    report["samples"] = data.size();
    std::cout << report.dump(2) << "\n";
    std::printf("accuracy %.4f on %zu %s samples\n", accuracy, data.size(),
                manifest.split.c_str());
    return kExitOk;
}

int cmd_predict(const RunManifest &manifest) {
    const Checkpoint ckpt = load_checkpoint(manifest.checkpoint_path);
    const auto spec = spec_from_checkpoint(ckpt);

    mnist::RawDataset raw;
    raw.images = mnist::parse_idx_images(mnist::read_file_maybe_gzip(manifest.images_path));
    const bool have_labels = !manifest.labels_path.empty();
    if (have_labels) {
        raw.labels =
            mnist::parse_idx_labels(mnist::read_file_maybe_gzip(manifest.labels_path));
        if (raw.labels.size() != raw.images.size()) {
            throw std::runtime_error("image/label count mismatch");
        }
    } else {
        raw.labels.assign(raw.images.size(), 0);
    }
    if (manifest.limit != 0 && raw.images.size() > manifest.limit) {
        raw.images.resize(manifest.limit);
        raw.labels.resize(manifest.limit);
    }

    const auto data = encode_dataset(raw, manifest.downscale);
    if (data.num_qubits != ckpt.num_qubits) {
        throw std::runtime_error("checkpoint register (" +
                                 std::to_string(ckpt.num_qubits) +
                                 " qubits) does not match the encoded data (" +
                                 std::to_string(data.num_qubits) + ")");
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto evolved = forward(spec, ckpt.weights, data.samples[i].input);
        const auto dist = readout_distribution(evolved, kNumClasses);
        const int predicted = argmax_class(dist);
        std::printf("image %zu: predicted %d dist [", i, predicted);
        for (int c = 0; c < kNumClasses; ++c) {
            std::printf("%s%.4f", c ? ", " : "", dist[static_cast<std::size_t>(c)]);
        }
        std::printf("]");
        if (have_labels) {
            const int label = raw.labels[i];
            correct += predicted == label ? 1 : 0;
            std::printf(" label %d %s", label, predicted == label ? "ok" : "MISS");
        }
        std::printf("\n");
    }
    if (have_labels && !raw.labels.empty()) {
        std::printf("accuracy %.4f on %zu samples\n",
                    static_cast<double>(correct) / static_cast<double>(data.size()),
                    data.size());
    }
    return kExitOk;
}

int cmd_gradcheck(const RunManifest &manifest) {
    if (manifest.instances < 1) {
        throw std::runtime_error("gradcheck needs at least one instance");
    }
    const int qubits = manifest.qubits != 0 ? manifest.qubits : 3;
    const auto spec = build_ansatz(qubits, manifest.layers, manifest.config.dt);

    Rng rng(manifest.config.seed);
    double worst = 0.0;
    int worst_instance = -1;
    std::size_t worst_param = 0;
    std::string worst_pair;
    // The 10-class MSE loss needs at least 4 qubits; below that only the
    // fidelity-loss engines are comparable.
    const bool check_mse = (std::size_t{1} << qubits) >= 10;

    for (int instance = 0; instance < manifest.instances; ++instance) {
        Weights w;
        w.values.resize(spec.num_params);
        for (auto &v : w.values) {
            v = rng.uniform(-1.5, 1.5);
        }
        std::vector<Complex> amps(std::size_t{1} << qubits);
        double norm_sq = 0.0;
        for (auto &a : amps) {
            a = Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            norm_sq += std::norm(a);
        }
        for (auto &a : amps) {
            a /= std::sqrt(norm_sq);
        }
        const auto psi = Statevector::from_amplitudes(std::move(amps));
        const int num_classes =
            static_cast<int>(std::min<std::size_t>(10, std::size_t{1} << qubits));
        const auto y = LabelState{static_cast<int>(rng.below(num_classes)),
                                  Statevector::basis_state(
                                      qubits, rng.below(std::size_t{1} << qubits))};

        auto analytic = fidelity_grad(spec, w, psi, y);
        if (manifest.corrupt_analytic) {
            for (auto &v : analytic.values) {
                v = -v;
            }
        }
        const auto shift = parameter_shift_grad(spec, w, psi, y, LossKind::Fidelity);
        const auto fd =
            finite_difference_grad(spec, w, psi, y, LossKind::Fidelity, manifest.config.fd_step);
        Gradient shift_mse, fd_mse;
        if (check_mse) {
            shift_mse = parameter_shift_grad(spec, w, psi, y, LossKind::ProbMse);
            fd_mse = finite_difference_grad(spec, w, psi, y, LossKind::ProbMse,
                                            manifest.config.fd_step);
        }

        for (std::size_t k = 0; k < spec.num_params; ++k) {
            std::vector<std::pair<const char *, double>> pairs = {
                {"analytic-vs-shift", grad_disagreement(analytic[k], shift[k])},
                {"analytic-vs-fd", grad_disagreement(analytic[k], fd[k])},
            };
            if (check_mse) {
                pairs.emplace_back("shiftmse-vs-fdmse",
                                   grad_disagreement(shift_mse[k], fd_mse[k]));
            }
            for (const auto &[name, err] : pairs) {
                if (err > worst) {
                    worst = err;
                    worst_instance = instance;
                    worst_param = k;
                    worst_pair = name;
                }
            }
        }
    }

    std::printf("gradcheck: %d instances, %d qubits, %d layers, %zu parameters%s\n",
                manifest.instances, qubits, manifest.layers, spec.num_params,
                check_mse ? "" : " (register too small for the 10-class MSE pair)");
    std::printf("max relative disagreement %.3e (threshold %.1e)\n", worst,
                manifest.threshold);
    if (worst > manifest.threshold) {
        std::printf("FAIL: worst pair %s at instance %d, parameter %zu\n",
                    worst_pair.c_str(), worst_instance, worst_param);
        return kExitGradcheckFailed;
    }
    std::printf("PASS\n");
    return kExitOk;
}

int cmd_bench(const RunManifest &manifest) {
    const int qubits = manifest.qubits != 0 ? manifest.qubits : 18;
    if (qubits < 2) {
        throw std::runtime_error("bench needs at least 2 qubits");
    }

    // Gate-kernel throughput: rotation sweeps across every qubit.
    Statevector state(qubits);
    {
        // spread amplitude so the sweep is not trivially sparse
        for (int q = 0; q < qubits; ++q) {
            apply_single_qubit_unchecked(state, q, fixed_gate_matrix(FixedGate::H));
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    int gates = 0;
    for (int rep = 0; rep < manifest.bench_reps; ++rep) {
        for (int q = 0; q < qubits; ++q) {
            apply_single_qubit_unchecked(
                state, q, rotation_matrix(PauliAxis::X, 0.01 * (rep + 1), 1.0));
            ++gates;
        }
    }
    const double gate_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double amps_per_s =
        static_cast<double>(gates) * std::pow(2.0, qubits) / gate_seconds;

    // Per-epoch estimate for the configured circuit on synthetic data.
    const int epoch_qubits = 6;
    const auto spec = build_ansatz(epoch_qubits, manifest.layers, manifest.config.dt);
    Rng rng(manifest.config.seed);
    EncodedDataset synth;
    synth.num_qubits = epoch_qubits;
    for (int i = 0; i < manifest.config.batch_size; ++i) {
        std::vector<Complex> amps(std::size_t{1} << epoch_qubits);
        double norm_sq = 0.0;
        for (auto &a : amps) {
            a = Complex{rng.uniform(), 0.0};
            norm_sq += std::norm(a);
        }
        for (auto &a : amps) {
            a /= std::sqrt(norm_sq);
        }
        synth.samples.push_back(
            EncodedSample{Statevector::from_amplitudes(std::move(amps)),
                          encode_label(static_cast<int>(rng.below(10)), epoch_qubits)});
    }
    const auto w = init_weights(spec, manifest.config.seed);
    std::vector<std::size_t> indices(synth.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        indices[i] = i;
    }
    const auto t1 = std::chrono::steady_clock::now();
    (void)batch_gradient(spec, w, synth, indices, manifest.config);
    const double batch_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    constexpr int kSamplesPerEpoch = 500;
    const double epoch_seconds =
        batch_seconds * std::ceil(static_cast<double>(kSamplesPerEpoch) /
                                  manifest.config.batch_size);

    std::printf("gate kernel: %d qubits, %d gates -> %.3e amplitudes/second\n", qubits,
                gates, amps_per_s);
    std::printf("gradient batch (%d samples, %d layers, %s engine): %.3f s\n",
                manifest.config.batch_size, manifest.layers,
                to_string(manifest.config.grad_engine).c_str(), batch_seconds);
    std::printf("epoch estimate at %d samples: %.2f s/epoch\n", kSamplesPerEpoch,
                epoch_seconds);
    return kExitOk;
}

namespace {

void add_circuit_flags(CLI::App *cmd, RunManifest &m) {
    cmd->add_option("--qubits", m.qubits, "Register size; 0 infers it from the data");
    cmd->add_option("--layers", m.layers, "Ansatz depth");
    cmd->add_option("--dt", m.config.dt, "Global time step multiplying every rotation");
}

void add_data_flags(CLI::App *cmd, RunManifest &m) {
    cmd->add_option("--data-dir", m.data_dir, "Directory with the IDX files")
        ->required();
    cmd->add_option("--classes", m.classes, "Digit classes to keep, e.g. 0,1")
        ->delimiter(',');
    cmd->add_option("--limit", m.limit, "Per-class training sample cap (0 = all)");
    cmd->add_option("--limit-test", m.limit_test,
                    "Per-class test sample cap (0 = same as --limit)");
    cmd->add_option("--downscale", m.downscale,
                    "Block-mean factor applied after zero-padding");
    cmd->add_option("--threads", m.config.threads, "Worker thread cap (0 = hardware)");
}

} // namespace

int run(int argc, const char *const *argv) {
    RunManifest m;
    std::string loss_name = "probmse";
    std::string grad_name = "shift";

    CLI::App app{"Statevector simulator and trainer for time-evolution quantum "
                 "neural networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; command-line flags override it");

    auto *train_cmd = app.add_subcommand("train", "Train a circuit on IDX digit data");
    add_circuit_flags(train_cmd, m);
    add_data_flags(train_cmd, m);
    train_cmd->add_option("--lr", m.config.learning_rate, "Initial learning rate");
    train_cmd->add_option("--lr-decay", m.config.lr_decay, "Per-epoch decay factor");
    train_cmd->add_option("--batch", m.config.batch_size, "Mini-batch size");
    train_cmd->add_option("--epochs", m.config.epochs, "Epoch count");
    train_cmd->add_option("--seed", m.config.seed, "RNG seed (init + shuffling)");
    train_cmd->add_option("--loss", loss_name, "Loss: fidelity|probmse");
    train_cmd->add_option("--grad", grad_name, "Gradient engine: analytic|shift|fd");
    train_cmd->add_option("--fd-step", m.config.fd_step, "Finite-difference step");
    train_cmd->add_option("--out-dir", m.out_dir, "Output directory");
    train_cmd->add_flag("--dry-run", m.dry_run, "Validate config and data, then exit");

    auto *eval_cmd = app.add_subcommand("eval", "Score a checkpoint on a split");
    add_circuit_flags(eval_cmd, m);
    add_data_flags(eval_cmd, m);
    eval_cmd->add_option("--checkpoint", m.checkpoint_path, "Checkpoint file")
        ->required();
    eval_cmd->add_option("--split", m.split, "train|test");

    auto *predict_cmd =
        app.add_subcommand("predict", "Per-image class and readout distribution");
    predict_cmd->add_option("--checkpoint", m.checkpoint_path, "Checkpoint file")
        ->required();
    predict_cmd->add_option("--images", m.images_path, "IDX image file")->required();
    predict_cmd->add_option("--labels", m.labels_path, "Optional IDX label file");
    predict_cmd->add_option("--limit", m.limit, "Predict at most this many images");
    predict_cmd->add_option("--downscale", m.downscale,
                            "Block-mean factor applied after zero-padding");

    auto *gradcheck_cmd = app.add_subcommand(
        "gradcheck", "Cross-validate the analytic, shift and FD gradient engines");
    gradcheck_cmd->add_option("--qubits", m.qubits, "Register size (default 3)");
    gradcheck_cmd->add_option("--layers", m.layers, "Ansatz depth (default 2)");
    gradcheck_cmd->add_option("--dt", m.config.dt, "Time step");
    gradcheck_cmd->add_option("--instances", m.instances, "Random instances");
    gradcheck_cmd->add_option("--seed", m.config.seed, "RNG seed");
    gradcheck_cmd->add_option("--threshold", m.threshold, "Max tolerated disagreement");
    gradcheck_cmd->add_option("--fd-step", m.config.fd_step, "Finite-difference step");
    gradcheck_cmd
        ->add_flag("--corrupt-analytic", m.corrupt_analytic,
                   "Testing hook: negate the analytic gradient to force a failure")
        ->group(""); // hidden

    auto *bench_cmd =
        app.add_subcommand("bench", "Kernel throughput and per-epoch timing");
    bench_cmd->add_option("--qubits", m.qubits, "Kernel register size (default 18)");
    bench_cmd->add_option("--layers", m.layers, "Circuit depth for the epoch estimate");
    bench_cmd->add_option("--reps", m.bench_reps, "Kernel benchmark repetitions");
    bench_cmd->add_option("--batch", m.config.batch_size, "Batch size");
    bench_cmd->add_option("--grad", grad_name, "Gradient engine for the estimate");
    bench_cmd->add_option("--threads", m.config.threads, "Worker thread cap");
    bench_cmd->add_option("--seed", m.config.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        m.config.loss_kind = loss_kind_from_string(loss_name);
        m.config.grad_engine = grad_engine_from_string(grad_name);
        if (train_cmd->parsed()) {
            m.command = "train";
            return cmd_train(m);
        }
        if (eval_cmd->parsed()) {
            m.command = "eval";
            // Unset circuit flags mean "take the checkpoint's dimensions".
            if (eval_cmd->count("--layers") == 0) {
                m.layers = 0;
            }
            return cmd_eval(m);
        }
        if (predict_cmd->parsed()) {
            m.command = "predict";
            return cmd_predict(m);
        }
        if (gradcheck_cmd->parsed()) {
            m.command = "gradcheck";
            if (gradcheck_cmd->count("--layers") == 0) {
                m.layers = 2;
            }
            return cmd_gradcheck(m);
        }
        m.command = "bench";
        return cmd_bench(m);
    } catch (const TrainingDiverged &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace qnn::cli
