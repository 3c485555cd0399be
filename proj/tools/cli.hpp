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
 * Command implementations behind the `qnn` binary. Each command takes a
 * resolved RunManifest and returns a process exit status:
 *   0 success, 1 gradcheck threshold exceeded, 2 config/data error,
 *   3 training diverged (non-finite loss).
 */
#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "qnn/trainer.hpp"

namespace qnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGradcheckFailed = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitDiverged = 3;

/// Everything a command run depends on, echoed into the run summary.
struct RunManifest {
    std::string command;

    // circuit
    int qubits{0}; ///< 0 = infer from the encoded data
    int layers{6};
    TrainConfig config;

    // data
    std::string data_dir;
    std::set<int> classes;         ///< empty = all ten digits
    std::size_t limit{0};          ///< per-class training cap, 0 = unlimited
    std::size_t limit_test{0};     ///< per-class test cap, 0 = unlimited
    int downscale{1};
    std::string split{"test"};     ///< eval split
    std::string images_path;       ///< predict input
    std::string labels_path;       ///< optional predict reference labels

    // outputs
    std::string out_dir{"runs/latest"};
    std::string checkpoint_path;

    // gradcheck
    int instances{20};
    double threshold{1e-5};
    bool corrupt_analytic{false}; ///< testing hook: negates the analytic engine

    // bench
    int bench_reps{200};

    bool dry_run{false};
};

int cmd_train(const RunManifest &manifest);
int cmd_eval(const RunManifest &manifest);
int cmd_predict(const RunManifest &manifest);
int cmd_gradcheck(const RunManifest &manifest);
int cmd_bench(const RunManifest &manifest);

/// Parse argv and dispatch; returns a process exit status.
int run(int argc, const char *const *argv);

} // namespace qnn::cli
