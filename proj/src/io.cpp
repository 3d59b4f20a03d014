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


#include "telerob/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace telerob::io {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(at(path, key), "missing field");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, "expected an array");
  return j;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw FormatError(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw FormatError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(number(j[i], at(path, i)));
  return out;
}

RMatrix real_matrix(const Json& j, const std::string& path) {
  array(j, path);
  if (j.empty()) throw FormatError(path, "empty matrix");
  const std::size_t cols = array(j[0], at(path, 0)).size();
  RMatrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = at(path, r);
    if (array(j[r], rp).size() != cols) throw FormatError(rp, "ragged row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], at(rp, c));
    }
  }
  return m;
}

Json real_to_json(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CMatrix> matrices(const Json& j, const std::string& path, std::vector<Dims>* dims) {
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) {
    Dims d;
    out.push_back(matrix_from_json(j[i], at(path, i), &d));
    if (dims != nullptr) dims->push_back(d);
  }
  return out;
}

Json matrices_to_json(const std::vector<CMatrix>& ms, const Dims& dims) {
  Json out = Json::array();
  for (const CMatrix& m : ms) out.push_back(matrix_to_json(m, dims));
  return out;
}

Dims flat(const CMatrix& m) { return Dims{static_cast<std::size_t>(m.rows())}; }

Dims common_dims(const std::vector<Dims>& dims, std::size_t factors, const std::string& path) {
  if (dims.empty()) throw FormatError(path, "expected at least one matrix");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i].size() != factors) {
      throw FormatError(at(at(path, i), "dims"), fmt::format("expected {} factors", factors));
    }
    if (!(dims[i] == dims.front())) throw FormatError(at(at(path, i), "dims"), "dims differ from entry 0");
  }
  return dims.front();
}

Json solution_to_json(const conic::SdpSolution& s) {
  Json j;
  j["status"] = conic::to_string(s.status);
  j["primal_value"] = s.primal_value;
  j["dual_value"] = s.dual_value;
  j["gap"] = s.gap;
  j["max_constraint_violation"] = s.max_constraint_violation;
  j["iterations"] = s.iterations;
  j["detail"] = s.detail;
  j["primal_blocks"] = Json::array();
  for (const CMatrix& m : s.primal_blocks) j["primal_blocks"].push_back(matrix_to_json(m, flat(m)));
  j["dual_slacks"] = Json::array();
  for (const CMatrix& m : s.dual_slacks) j["dual_slacks"].push_back(matrix_to_json(m, flat(m)));
  j["dual_multipliers"] = s.dual_multipliers;
  return j;
}

conic::SdpSolution solution_from_json(const Json& j, const std::string& path) {
  conic::SdpSolution s;
  try {
    s.status = conic::status_from_string(text(field(j, "status", path), at(path, "status")));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(at(path, "status"), e.what());
  }
  s.primal_value = number(field(j, "primal_value", path), at(path, "primal_value"));
  s.dual_value = number(field(j, "dual_value", path), at(path, "dual_value"));
  s.gap = number(field(j, "gap", path), at(path, "gap"));
  if (const Json* v = optional_field(j, "max_constraint_violation", path)) {
    s.max_constraint_violation = number(*v, at(path, "max_constraint_violation"));
  }
  if (const Json* v = optional_field(j, "iterations", path)) {
    s.iterations = static_cast<int>(count(*v, at(path, "iterations")));
  }
  if (const Json* v = optional_field(j, "detail", path)) s.detail = text(*v, at(path, "detail"));
  s.primal_blocks = matrices(field(j, "primal_blocks", path), at(path, "primal_blocks"), nullptr);
  s.dual_slacks = matrices(field(j, "dual_slacks", path), at(path, "dual_slacks"), nullptr);
  s.dual_multipliers =
      numbers(field(j, "dual_multipliers", path), at(path, "dual_multipliers"));
  return s;
}

Json ensemble_to_json(const InputEnsemble& e) {
  Json j;
  j["type"] = "ensemble";
  j["states"] = Json::array();
  for (const DensityMatrix& s : e.states()) j["states"].push_back(matrix_to_json(s.matrix(), s.dims()));
  j["weights"] = e.weights();
  return j;
}

InputEnsemble ensemble_from_json(const Json& j, const std::string& path) {
  std::vector<Dims> dims;
  const std::vector<CMatrix> ms = matrices(field(j, "states", path), at(path, "states"), &dims);
  std::vector<DensityMatrix> states;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    try {
      states.emplace_back(ms[i], dims[i]);
    } catch (const Error& e) {
      throw FormatError(at(at(path, "states"), i), e.what());
    }
  }
  if (const Json* w = optional_field(j, "weights", path)) {
    return InputEnsemble(std::move(states), numbers(*w, at(path, "weights")));
  }
  return InputEnsemble(std::move(states));
}

struct ToJson {
  Json operator()(const DensityMatrix& s) const {
    return {{"type", "state"}, {"matrix", matrix_to_json(s.matrix(), s.dims())}};
  }
  Json operator()(const Povm& p) const {
    return {{"type", "povm"}, {"elements", matrices_to_json(p.elements(), p.dims())}};
  }
  Json operator()(const TeleportationInstrument& t) const {
    return {{"type", "instrument"}, {"ops", matrices_to_json(t.ops(), t.dims())}};
  }
  Json operator()(const InputEnsemble& e) const { return ensemble_to_json(e); }
  Json operator()(const games::CorrelationGame& g) const {
    return {{"type", "game"},
            {"sigma", matrix_to_json(g.sigma().matrix(), g.sigma().dims())},
            {"targets", matrices_to_json(g.targets(), Dims{g.reference_dim(), g.db()})},
            {"scores", g.scores()}};
  }
  Json operator()(const discrim::DiscriminationInstrument& e) const {
    Json branches = Json::array();
    for (const ChoiOperator& c : e.branches()) {
      branches.push_back(matrix_to_json(c.matrix(), Dims{c.in_dim(), c.out_dim()}));
    }
    return {{"type", "discrimination"}, {"branches", branches}, {"multiplicities", e.multiplicities()}};
  }
  Json operator()(const simorder::ClassicalSimulation& s) const {
    return {{"type", "classical_sim"}, {"stochastic", real_to_json(s.stochastic())}};
  }
  Json operator()(const simorder::QuantumSimulation& q) const {
    Json conditionals = Json::array();
    for (const RMatrix& p : q.conditionals()) conditionals.push_back(real_to_json(p));
    return {{"type", "quantum_sim"},
            {"weights", q.weights()},
            {"conditionals", conditionals},
            {"pre", matrices_to_json(q.pre(), q.pre_dims())},
            {"post", matrices_to_json(q.post(), q.post_dims())}};
  }
  Json operator()(const rot::RotDualSolution& d) const {
    const Dims dims{d.dv, d.db};
    Json decomps = Json::array();
    for (const auto& [p, q] : d.decompositions) {
      decomps.push_back({{"p", matrix_to_json(p, dims)}, {"q", matrix_to_json(q, dims)}});
    }
    return {{"type", "rot_dual"},
            {"value", d.value},
            {"witnesses", matrices_to_json(d.witnesses, dims)},
            {"b", matrix_to_json(d.b_op, dims)},
            {"decompositions", decomps},
            {"certificate", solution_to_json(d.certificate)}};
  }
  Json operator()(const Certificate& c) const {
    return {{"type", "certificate"}, {"program", c.program}, {"solution", solution_to_json(c.solution)}};
  }
  Json operator()(const FitData& f) const {
    Json data = Json::array();
    for (const auto& row : f.data) data.push_back(matrices_to_json(row, Dims{f.db}));
    return {{"type", "fit_data"}, {"inputs", ensemble_to_json(f.inputs)}, {"data", data}, {"db", f.db}};
  }
};

Object build_object(const std::string& type, const Json& j, const std::string& path) {
  if (type == "state") {
    Dims dims;
    CMatrix m = matrix_from_json(field(j, "matrix", path), at(path, "matrix"), &dims);
    return DensityMatrix(std::move(m), dims);
  }
  if (type == "povm") {
    std::vector<Dims> dims;
    auto ms = matrices(field(j, "elements", path), at(path, "elements"), &dims);
    const Dims common = dims.empty() ? Dims{} : dims.front();
    common_dims(dims, common.size(), at(path, "elements"));
    return Povm(std::move(ms), common);
  }
  if (type == "instrument") {
    std::vector<Dims> dims;
    auto ms = matrices(field(j, "ops", path), at(path, "ops"), &dims);
    const Dims d = common_dims(dims, 2, at(path, "ops"));
    return TeleportationInstrument(std::move(ms), d[0], d[1]);
  }
  if (type == "ensemble") return ensemble_from_json(j, path);
  if (type == "game") {
    Dims sd;
    CMatrix sigma = matrix_from_json(field(j, "sigma", path), at(path, "sigma"), &sd);
    if (sd.size() != 2) throw FormatError(at(at(path, "sigma"), "dims"), "expected 2 factors");
    std::vector<Dims> td;
    auto targets = matrices(field(j, "targets", path), at(path, "targets"), &td);
    const Dims t = common_dims(td, 2, at(path, "targets"));
    if (t[0] != sd[0]) {
      throw FormatError(at(path, "targets"), "reference dimension differs from sigma");
    }
    return games::CorrelationGame(DensityMatrix(std::move(sigma), sd), std::move(targets),
                                  numbers(field(j, "scores", path), at(path, "scores")), t[1]);
  }
  if (type == "discrimination") {
    std::vector<Dims> dims;
    auto ms = matrices(field(j, "branches", path), at(path, "branches"), &dims);
    const Dims d = common_dims(dims, 2, at(path, "branches"));
    std::vector<ChoiOperator> branches;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      try {
        branches.emplace_back(ms[i], d[0], d[1]);
      } catch (const Error& e) {
        throw FormatError(at(at(path, "branches"), i), e.what());
      }
    }
    if (const Json* m = optional_field(j, "multiplicities", path)) {
      std::vector<std::size_t> mult;
      for (std::size_t i = 0; i < array(*m, at(path, "multiplicities")).size(); ++i) {
        mult.push_back(count((*m)[i], at(at(path, "multiplicities"), i)));
      }
      return discrim::DiscriminationInstrument(std::move(branches), std::move(mult));
    }
    return discrim::DiscriminationInstrument(std::move(branches));
  }
  if (type == "classical_sim") {
    return simorder::ClassicalSimulation(
        real_matrix(field(j, "stochastic", path), at(path, "stochastic")));
  }
  if (type == "quantum_sim") {
    std::vector<RMatrix> conditionals;
    const Json& c = array(field(j, "conditionals", path), at(path, "conditionals"));
    for (std::size_t i = 0; i < c.size(); ++i) {
      conditionals.push_back(real_matrix(c[i], at(at(path, "conditionals"), i)));
    }
    std::vector<Dims> pd;
    std::vector<Dims> qd;
    auto pre = matrices(field(j, "pre", path), at(path, "pre"), &pd);
    auto post = matrices(field(j, "post", path), at(path, "post"), &qd);
    const Dims pre_dims = common_dims(pd, 2, at(path, "pre"));
    const Dims post_dims = common_dims(qd, 2, at(path, "post"));
    return simorder::QuantumSimulation(numbers(field(j, "weights", path), at(path, "weights")),
                                       std::move(conditionals), std::move(pre), std::move(post),
                                       pre_dims, post_dims);
  }
  if (type == "rot_dual") {
    rot::RotDualSolution d;
    std::vector<Dims> wd;
    d.witnesses = matrices(field(j, "witnesses", path), at(path, "witnesses"), &wd);
    const Dims dims = common_dims(wd, 2, at(path, "witnesses"));
    d.dv = dims[0];
    d.db = dims[1];
    Dims bd;
    d.b_op = matrix_from_json(field(j, "b", path), at(path, "b"), &bd);
    if (!(bd == dims)) throw FormatError(at(path, "b"), "dims differ from the witnesses");
    d.value = number(field(j, "value", path), at(path, "value"));
    if (const Json* dec = optional_field(j, "decompositions", path)) {
      for (std::size_t i = 0; i < array(*dec, at(path, "decompositions")).size(); ++i) {
        const std::string ip = at(at(path, "decompositions"), i);
        d.decompositions.emplace_back(matrix_from_json(field((*dec)[i], "p", ip), at(ip, "p")),
                                      matrix_from_json(field((*dec)[i], "q", ip), at(ip, "q")));
      }
    }
    if (const Json* c = optional_field(j, "certificate", path)) {
      d.certificate = solution_from_json(*c, at(path, "certificate"));
    }
    return d;
  }
  if (type == "certificate") {
    return Certificate{text(field(j, "program", path), at(path, "program")),
                       solution_from_json(field(j, "solution", path), at(path, "solution"))};
  }
  if (type == "fit_data") {
    InputEnsemble inputs = ensemble_from_json(field(j, "inputs", path), at(path, "inputs"));
    std::vector<std::vector<CMatrix>> data;
    const Json& rows = array(field(j, "data", path), at(path, "data"));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      data.push_back(matrices(rows[a], at(at(path, "data"), a), nullptr));
    }
    return FitData{std::move(inputs), std::move(data), count(field(j, "db", path), at(path, "db"))};
  }
  throw FormatError(at(path, "type"), fmt::format("unknown object type '{}'", type));
}

template <typename T>
struct TypeTag;
template <> struct TypeTag<DensityMatrix> { static constexpr const char* name = "state"; };
template <> struct TypeTag<Povm> { static constexpr const char* name = "povm"; };
template <> struct TypeTag<TeleportationInstrument> { static constexpr const char* name = "instrument"; };
template <> struct TypeTag<InputEnsemble> { static constexpr const char* name = "ensemble"; };
template <> struct TypeTag<games::CorrelationGame> { static constexpr const char* name = "game"; };
template <> struct TypeTag<discrim::DiscriminationInstrument> { static constexpr const char* name = "discrimination"; };
template <> struct TypeTag<simorder::ClassicalSimulation> { static constexpr const char* name = "classical_sim"; };
template <> struct TypeTag<simorder::QuantumSimulation> { static constexpr const char* name = "quantum_sim"; };
template <> struct TypeTag<rot::RotDualSolution> { static constexpr const char* name = "rot_dual"; };
template <> struct TypeTag<Certificate> { static constexpr const char* name = "certificate"; };
template <> struct TypeTag<FitData> { static constexpr const char* name = "fit_data"; };

}  // namespace

std::string type_name(const Object& o) {
  return std::visit([](const auto& v) { return std::string(TypeTag<std::decay_t<decltype(v)>>::name); }, o);
}

Json matrix_to_json(const CMatrix& m, const Dims& dims) {
  dims.check_side(m.rows());
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dims", dims.factors()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json& j, const std::string& path, Dims* dims) {
  std::vector<std::size_t> factors;
  const std::string dp = at(path, "dims");
  const Json& dj = array(field(j, "dims", path), dp);
  if (dj.empty()) throw FormatError(dp, "expected at least one factor");
  std::size_t n = 1;
  for (std::size_t i = 0; i < dj.size(); ++i) {
    const std::size_t f = count(dj[i], at(dp, i));
    if (f == 0) throw FormatError(at(dp, i), "dimension must be positive");
    factors.push_back(f);
    n *= f;
  }
  const RMatrix re = real_matrix(field(j, "re", path), at(path, "re"));
  RMatrix im = RMatrix::Zero(re.rows(), re.cols());
  if (const Json* ij = optional_field(j, "im", path)) im = real_matrix(*ij, at(path, "im"));
  const auto side = static_cast<Eigen::Index>(n);
  if (re.rows() != side || re.cols() != side) {
    throw FormatError(at(path, "re"), fmt::format("expected {0}x{0} for dims, got {1}x{2}", n,
                                                  re.rows(), re.cols()));
  }
  if (im.rows() != side || im.cols() != side) {
    throw FormatError(at(path, "im"), fmt::format("expected {0}x{0} for dims, got {1}x{2}", n,
                                                  im.rows(), im.cols()));
  }
  if (dims != nullptr) *dims = Dims(factors);
  CMatrix m(side, side);
  m.real() = re;
  m.imag() = im;
  return m;
}

Json to_json(const Object& o) { return std::visit(ToJson{}, o); }

Object object_from_json(const Json& j, const std::string& path) {
  const std::string type = text(field(j, "type", path), at(path, "type"));
  try {
    return build_object(type, j, path);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(path, e.what());
  }
}

Json to_json(const ExperimentFile& f) {
  Json objects = Json::object();
  for (const auto& [name, o] : f.objects) objects[name] = to_json(o);
  return {{"version", f.version}, {"objects", objects}};
}

ExperimentFile file_from_json(const Json& j, const std::string& path) {
  ExperimentFile f;
  f.version = text(field(j, "version", path), at(path, "version"));
  if (f.version != kVersion) {
    throw FormatError(at(path, "version"),
                      fmt::format("unsupported version '{}', expected '{}'", f.version, kVersion));
  }
  const Json& objects = field(j, "objects", path);
  if (!objects.is_object()) throw FormatError(at(path, "objects"), "expected an object");
  for (const auto& [name, value] : objects.items()) {
    f.objects.emplace(name, object_from_json(value, at(at(path, "objects"), name)));
  }
  return f;
}

ExperimentFile parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("$", e.what());
  }
  return file_from_json(j);
}

std::string read_text(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw FormatError(filename, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentFile load(const std::string& filename) {
  const std::string body = read_text(filename);
  try {
    return parse(body);
  } catch (const FormatError& e) {
    throw FormatError(filename + ":" + e.path(), e.message());
  }
}

void save(const ExperimentFile& f, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw FormatError(filename, "cannot write file");
  out << to_json(f).dump(2) << '\n';
}

template <typename T>
const T& select(const ExperimentFile& f, const std::string& name, const std::string& source) {
  if (!name.empty()) {
    const auto it = f.objects.find(name);
    if (it == f.objects.end()) throw FormatError(source, fmt::format("no object named '{}'", name));
    if (const T* v = std::get_if<T>(&it->second)) return *v;
    throw FormatError(source + "#" + name, fmt::format("has type '{}', expected '{}'",
                                                       type_name(it->second), TypeTag<T>::name));
  }
  const T* found = nullptr;
  std::size_t hits = 0;
  for (const auto& [key, o] : f.objects) {
    if (const T* v = std::get_if<T>(&o)) {
      found = v;
      ++hits;
    }
  }
  if (hits == 0) throw FormatError(source, fmt::format("no object of type '{}'", TypeTag<T>::name));
  if (hits > 1) {
    throw FormatError(source, fmt::format("{} objects of type '{}'; name one with #name", hits,
                                          TypeTag<T>::name));
  }
  return *found;
}

template <typename T>
T load_object(const std::string& spec) {
  const auto hash = spec.find('#');
  const std::string file = spec.substr(0, hash);
  const std::string name = hash == std::string::npos ? "" : spec.substr(hash + 1);
  return select<T>(load(file), name, file);
}

#define TELEROB_IO_INSTANTIATE(T)                                                       \
  template const T& select<T>(const ExperimentFile&, const std::string&, const std::string&); \
  template T load_object<T>(const std::string&);

TELEROB_IO_INSTANTIATE(DensityMatrix)
TELEROB_IO_INSTANTIATE(Povm)
TELEROB_IO_INSTANTIATE(TeleportationInstrument)
TELEROB_IO_INSTANTIATE(InputEnsemble)
TELEROB_IO_INSTANTIATE(games::CorrelationGame)
TELEROB_IO_INSTANTIATE(discrim::DiscriminationInstrument)
TELEROB_IO_INSTANTIATE(simorder::ClassicalSimulation)
TELEROB_IO_INSTANTIATE(simorder::QuantumSimulation)
TELEROB_IO_INSTANTIATE(rot::RotDualSolution)
TELEROB_IO_INSTANTIATE(Certificate)
TELEROB_IO_INSTANTIATE(FitData)

#undef TELEROB_IO_INSTANTIATE

std::string digest(const std::string& bytes) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("digest: SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", out[i]);
  return hex;
}

}  // namespace telerob::io
