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


#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <set>

#include "oracles.hpp"
#include "telerob/errors.hpp"
#include "telerob/io.hpp"

namespace telerob::io {
namespace {

Json round_trip(const Object& o) { return to_json(object_from_json(to_json(o), "$")); }

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

TEST(Io, MatrixRoundTripIsExact) {
  random::Rng rng(91);
  const CMatrix m = rng.ginibre(4, 4);
  Dims dims{2, 2};
  Dims back_dims{1};
  const CMatrix back = matrix_from_json(matrix_to_json(m, dims), "$", &back_dims);
  EXPECT_EQ(back, m);
  EXPECT_TRUE(back_dims == dims);
}

TEST(Io, RealMatrixWithoutImaginaryPart) {
  const Json j = Json::parse(R"({"dims":[2],"re":[[1,0],[0,2]]})");
  const CMatrix m = matrix_from_json(j, "$");
  EXPECT_EQ(m(1, 1), std::complex<double>(2.0, 0.0));
  EXPECT_EQ(m(0, 1), std::complex<double>(0.0, 0.0));
}

TEST(Io, EveryObjectTypeRoundTrips) {
  random::Rng rng(92);
  const TeleportationInstrument t = testing::random_instrument(2, 3, 2, rng);
  const rot::RotDualSolution dual = rot::rot_dual(ideal_instrument(2), 1e-8);
  const InputEnsemble in = mub_states(2);
  std::vector<std::vector<CMatrix>> data(1);
  for (const DensityMatrix& s : in.states()) data[0].push_back(s.matrix());
  const std::vector<Object> objects = {
      random::random_state(Dims{2, 2}, 2, rng),
      bell_povm(2),
      t,
      in,
      games::fidelity_game_of(in, 4),
      discrim::pauli_twirl(2),
      simorder::random_classical_sim(3, 2, rng),
      simorder::random_quantum_sim(2, 2, 3, 2, rng),
      dual,
      Certificate{"rot_dual", dual.certificate},
      FitData{in, data, 2},
  };
  std::set<std::string> seen;
  for (const Object& o : objects) {
    const Json j = to_json(o);
    EXPECT_EQ(j.at("type").get<std::string>(), type_name(o));
    EXPECT_EQ(round_trip(o), j) << type_name(o);
    seen.insert(type_name(o));
  }
  EXPECT_EQ(seen.size(), std::variant_size_v<Object>);
}

TEST(Io, InstrumentSurvivesFile) {
  const auto dir = std::filesystem::temp_directory_path() / "telerob_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "ideal.json").string();
  ExperimentFile f;
  f.objects.emplace("ideal", ideal_instrument(2));
  f.objects.emplace("bell", bell_povm(2));
  save(f, path);
  const auto t = load_object<TeleportationInstrument>(path);
  EXPECT_EQ(t[2], ideal_instrument(2)[2]);
  EXPECT_NO_THROW(load_object<Povm>(path + "#bell"));
  EXPECT_NE(message_of([&] { load_object<Povm>(path + "#ideal"); }).find("has type 'instrument'"),
            std::string::npos);
  EXPECT_NE(message_of([&] { load_object<Povm>(path + "#missing"); }).find("no object named"),
            std::string::npos);
  EXPECT_NE(message_of([&] { load_object<DensityMatrix>(path); }).find("no object of type 'state'"),
            std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Io, ErrorsCarryJsonPaths) {
  ExperimentFile f;
  f.objects.emplace("x", ideal_instrument(2));
  Json j = to_json(f);
  j["objects"]["x"]["ops"][2]["re"][1][3] = "oops";
  try {
    file_from_json(j);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.path(), "$.objects.x.ops[2].re[1][3]");
    EXPECT_EQ(e.message(), "expected a number");
  }
}

TEST(Io, ValidationFailuresAreReported) {
  ExperimentFile f;
  f.objects.emplace("x", ideal_instrument(2));
  Json j = to_json(f);
  j["objects"]["x"]["ops"][0]["re"][0][0] = 5.0;
  EXPECT_THROW(file_from_json(j), ValidationError);

  Json k = to_json(f);
  k["objects"]["x"]["type"] = "teapot";
  EXPECT_NE(message_of([&] { file_from_json(k); }).find("$.objects.x.type"), std::string::npos);

  Json v = to_json(f);
  v["version"] = "other/9";
  EXPECT_NE(message_of([&] { file_from_json(v); }).find("$.version"), std::string::npos);

  Json d = to_json(f);
  d["objects"]["x"]["ops"][1]["dims"] = Json::array({2, 3});
  EXPECT_NE(message_of([&] { file_from_json(d); }).find("$.objects.x.ops[1]"), std::string::npos);
}

TEST(Io, SyntaxErrorsAndMissingFiles) {
  EXPECT_NE(message_of([] { parse("{ not json"); }).rfind("$:", 0), std::string::npos);
  EXPECT_THROW(load("/nonexistent/telerob.json"), FormatError);
}

TEST(Io, Sha256KnownVectors) {
  EXPECT_EQ(digest("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

}  // namespace
}  // namespace telerob::io
