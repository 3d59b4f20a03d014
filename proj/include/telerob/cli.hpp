// Copyright 2026 The telerob Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Command-line front end. Every command prints a record that is itself an
// experiment file: produced objects and certificates live under "objects",
// scalar results under "record".

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "telerob/io.hpp"

namespace telerob::cli {

enum ExitCode : int {
  kOk = 0,
  kFailedValidation = 1,
  kUsage = 2,
  kInvalidInput = 3,
  kSolverFailure = 4,
};

struct ResultRecord {
  std::string command;
  std::string inputs_digest;
  std::map<std::string, double> values;
  std::vector<std::string> certificates;  ///< names of certificate objects
  std::vector<std::string> warnings;
  double wall_time = 0.0;
  io::ExperimentFile objects;

  io::Json to_json() const;
  static ResultRecord from_json(const io::Json& j);
  /// Header row and one data row: command, digest, then the values.
  std::string to_csv() const;
};

/// Sweep over isotropic-state visibility with the Bell measurement.
struct SweepConfig {
  std::size_t d = 2;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;
  std::size_t fictitious_count = 10000;

  static SweepConfig from_json(const io::Json& j);
  std::vector<double> grid() const;
};

inline constexpr const char* kSweepHeader =
    "p,bell_fidelity,rot,avg_fidelity,game_score,game_classical,game_ratio,discrim_ratio";

/// One CSV row (no trailing newline) for visibility p.
std::string sweep_row(const SweepConfig& config, double p, double tol);

/// Full sweep table including the header; rows in grid order.
std::string sweep_csv(const SweepConfig& config, double tol, unsigned jobs = 1);

/// Runs a command line (without the program name); writes to out/err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace telerob::cli
