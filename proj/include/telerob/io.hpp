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

// JSON experiment files. A file carries a version tag and a map of named
// objects; each object has a "type" field. Matrices are stored as
// {"dims": [...], "re": [[...]], "im": [[...]]} in row-major order.

#include <cstddef>
#include <map>
#include <string>
#include <variant>

#include <json.hpp>

#include "telerob/conic.hpp"
#include "telerob/discrim.hpp"
#include "telerob/errors.hpp"
#include "telerob/games.hpp"
#include "telerob/qobjects.hpp"
#include "telerob/rot.hpp"
#include "telerob/simorder.hpp"

namespace telerob::io {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "telerob/1";

/// Malformed file content; the message starts with the JSON path.
class FormatError : public ValidationError {
 public:
  FormatError(const std::string& path, const std::string& message)
      : ValidationError(path + ": " + message), path_(path), message_(message) {}
  const std::string& path() const { return path_; }
  const std::string& message() const { return message_; }

 private:
  std::string path_;
  std::string message_;
};

/// A stored SDP solution together with the program it solves.
struct Certificate {
  std::string program;  ///< "rot_primal" or "rot_dual"
  conic::SdpSolution solution;
};

/// Noisy tomography data: data[a][x] is Bob's unnormalized state for
/// outcome a on input x.
struct FitData {
  InputEnsemble inputs;
  std::vector<std::vector<CMatrix>> data;
  std::size_t db;
};

using Object = std::variant<DensityMatrix, Povm, TeleportationInstrument, InputEnsemble,
                            games::CorrelationGame, discrim::DiscriminationInstrument,
                            simorder::ClassicalSimulation, simorder::QuantumSimulation,
                            rot::RotDualSolution, Certificate, FitData>;

/// Name of the "type" tag for an object.
std::string type_name(const Object& o);

struct ExperimentFile {
  std::string version = kVersion;
  std::map<std::string, Object> objects;
};

Json matrix_to_json(const CMatrix& m, const Dims& dims);
CMatrix matrix_from_json(const Json& j, const std::string& path, Dims* dims = nullptr);

Json to_json(const Object& o);
Object object_from_json(const Json& j, const std::string& path);

Json to_json(const ExperimentFile& f);
ExperimentFile file_from_json(const Json& j, const std::string& path = "$");

/// Parses text; syntax errors become FormatError at "$".
ExperimentFile parse(const std::string& text);
ExperimentFile load(const std::string& filename);
void save(const ExperimentFile& f, const std::string& filename);

/// The object called `name`, or the only object of type T when `name` is
/// empty. Throws FormatError otherwise. Instantiated for every Object
/// alternative.
template <typename T>
const T& select(const ExperimentFile& f, const std::string& name, const std::string& source);

/// Loads "file.json" or "file.json#name" and selects an object of type T.
template <typename T>
T load_object(const std::string& spec);

/// Hex SHA-256 of the given bytes.
std::string digest(const std::string& bytes);

/// Reads a whole file; throws FormatError if it cannot be opened.
std::string read_text(const std::string& filename);

}  // namespace telerob::io
