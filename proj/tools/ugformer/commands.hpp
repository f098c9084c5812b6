/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef UGFORMER_TOOLS_COMMANDS_HPP_
#define UGFORMER_TOOLS_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace ugformer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the directory that holds one sub-directory per
// dataset. Used when neither --data-root nor a config file sets it.
inline constexpr const char* kDataRootEnv = "UGFORMER_DATA_ROOT";

// Fixed artifact names inside a run directory.
inline constexpr const char* kManifestFile = "manifest.txt";
inline constexpr const char* kMetricsFile = "metrics.txt";
inline constexpr const char* kMetricsTableFile = "metrics_table.txt";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kEmbeddingsFile = "embeddings.csv";
inline constexpr const char* kNodeTableFile = "node_table.bin";
inline constexpr const char* kLossFile = "loss.txt";

std::string checkpoint_name(bool cross_validation, std::size_t fold);

// Runs one invocation; `args` excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ugformer::cli

#endif  // UGFORMER_TOOLS_COMMANDS_HPP_
