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


#include "telerob/cli.hpp"

#include <chrono>
#include <fstream>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "telerob/channels.hpp"
#include "telerob/random.hpp"

namespace telerob::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string g17(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void add_ppt_warning(ResultRecord& r, std::size_t d1, std::size_t d2) {
  if (rot::ppt_is_exact(d1, d2)) return;
  const std::string w = rot::kPptRelaxationWarning;
  for (const std::string& existing : r.warnings) {
    if (existing == w) return;
  }
  r.warnings.push_back(w);
}

games::UnitaryFamily family_of(const std::string& name) {
  if (name == "identity") return games::UnitaryFamily::identity_only();
  if (name == "pauli") return games::UnitaryFamily::pauli_group();
  if (name == "seesaw") return games::UnitaryFamily::seesaw_polished(20);
  throw ValidationError(fmt::format("unknown unitary family '{}'", name));
}

/// Shared state of one invocation.
struct Context {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool verbose = false;
  unsigned jobs = 1;
  std::string digest_input;

  void note(const std::string& label, const std::string& bytes) {
    digest_input += label;
    digest_input.push_back('\0');
    digest_input += bytes;
    digest_input.push_back('\0');
  }

  io::ExperimentFile file(const std::string& spec, std::string* name) {
    const auto hash = spec.find('#');
    const std::string path = spec.substr(0, hash);
    *name = hash == std::string::npos ? "" : spec.substr(hash + 1);
    note(spec, io::read_text(path));
    return io::load(path);
  }

  template <typename T>
  T load(const std::string& spec) {
    std::string name;
    const io::ExperimentFile f = file(spec, &name);
    return io::select<T>(f, name, spec.substr(0, spec.find('#')));
  }
};

using Action = std::function<int(Context&, ResultRecord&)>;

int finish_certificates(const conic::SdpProblem& problem, const conic::SdpSolution& s,
                        const std::string& name, double tol, ResultRecord& r) {
  const conic::CertificateReport rep = conic::verify_certificate(problem, s, tol);
  r.certificates.push_back(name);
  if (rep.ok) return kOk;
  for (const std::string& f : rep.failures) r.warnings.push_back(name + ": " + f);
  return kFailedValidation;
}

}  // namespace

io::Json ResultRecord::to_json() const {
  io::Json j = io::to_json(objects);
  io::Json rec;
  rec["command"] = command;
  rec["inputs_digest"] = inputs_digest;
  rec["values"] = io::Json::object();
  for (const auto& [k, v] : values) rec["values"][k] = v;
  rec["certificates"] = certificates;
  rec["warnings"] = warnings;
  rec["wall_time"] = wall_time;
  j["record"] = rec;
  return j;
}

ResultRecord ResultRecord::from_json(const io::Json& j) {
  ResultRecord r;
  r.objects = io::file_from_json(j);
  const auto it = j.find("record");
  if (it == j.end() || !it->is_object()) throw io::FormatError("$.record", "missing field");
  const io::Json& rec = *it;
  try {
    r.command = rec.at("command").get<std::string>();
    r.inputs_digest = rec.at("inputs_digest").get<std::string>();
    for (const auto& [k, v] : rec.at("values").items()) {
      r.values[k] = v.is_null() ? kNaN : v.get<double>();
    }
    r.certificates = rec.at("certificates").get<std::vector<std::string>>();
    r.warnings = rec.at("warnings").get<std::vector<std::string>>();
    r.wall_time = rec.at("wall_time").get<double>();
  } catch (const io::Json::exception& e) {
    throw io::FormatError("$.record", e.what());
  }
  return r;
}

std::string ResultRecord::to_csv() const {
  std::string header = "command,inputs_digest";
  std::string row = csv_field(command) + "," + inputs_digest;
  for (const auto& [k, v] : values) {
    header += "," + csv_field(k);
    row += "," + g17(v);
  }
  return header + "\n" + row + "\n";
}

SweepConfig SweepConfig::from_json(const io::Json& j) {
  SweepConfig c;
  if (!j.is_object()) throw io::FormatError("$", "expected an object");
  const auto num = [&](const io::Json& v, const std::string& path) {
    if (!v.is_number()) throw io::FormatError(path, "expected a number");
    return v.get<double>();
  };
  const auto cnt = [&](const io::Json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw io::FormatError(path, "expected a positive integer");
    }
    return v.get<std::size_t>();
  };
  if (j.contains("kind") && j["kind"] != "isotropic") {
    throw io::FormatError("$.kind", "only 'isotropic' sweeps are supported");
  }
  if (j.contains("d")) c.d = cnt(j["d"], "$.d");
  if (j.contains("fictitious_count")) c.fictitious_count = cnt(j["fictitious_count"], "$.fictitious_count");
  if (!j.contains("p")) throw io::FormatError("$.p", "missing field");
  const io::Json& p = j["p"];
  if (!p.is_object()) throw io::FormatError("$.p", "expected {start, stop, step}");
  for (const char* key : {"start", "stop", "step"}) {
    if (!p.contains(key)) throw io::FormatError(fmt::format("$.p.{}", key), "missing field");
  }
  c.start = num(p["start"], "$.p.start");
  c.stop = num(p["stop"], "$.p.stop");
  c.step = num(p["step"], "$.p.step");
  if (c.d < 2) throw io::FormatError("$.d", "dimension must be at least 2");
  if (!(c.step > 0.0)) throw io::FormatError("$.p.step", "step must be positive");
  if (!(c.start >= 0.0 && c.stop <= 1.0 && c.start <= c.stop)) {
    throw io::FormatError("$.p", "need 0 <= start <= stop <= 1");
  }
  return c;
}

std::vector<double> SweepConfig::grid() const {
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::min(stop, start + static_cast<double>(i) * step));
  return out;
}

std::string sweep_row(const SweepConfig& config, double p, double tol) {
  const std::size_t d = config.d;
  const DensityMatrix state = isotropic_state(d, p);
  const TeleportationInstrument instr = build_instrument(bell_povm(d), state);
  const double bell = (state.matrix() * linalg::phi_plus(d)).trace().real();
  const double t = rot::rot(instr, tol);
  const games::UnitaryFamily pauli = games::UnitaryFamily::pauli_group();
  const double fid = games::average_fidelity(instr, mub_states(d), pauli);
  const rot::RotDualSolution dual = rot::rot_dual(instr, tol);
  double score = kNaN;
  double classical = kNaN;
  double discrim_ratio = kNaN;
  try {
    const games::CorrelationGame g = games::build_game_from_dual(dual);
    score = games::game_score(g, instr, pauli).value;
    classical = games::classical_game_score(g, pauli, tol).value;
  } catch (const ValidationError&) {
  }
  try {
    const discrim::DiscrimBuild e = discrim::build_discrimination_from_dual(dual, config.fictitious_count);
    discrim_ratio = discrim::advantage_ratio(e.instrument, instr, tol).ratio;
  } catch (const ValidationError&) {
  }
  const double ratio = classical > 0.0 ? score / classical : kNaN;
  return fmt::format("{},{},{},{},{},{},{},{}", g17(p), g17(bell), g17(t), g17(fid), g17(score),
                     g17(classical), g17(ratio), g17(discrim_ratio));
}

std::string sweep_csv(const SweepConfig& config, double tol, unsigned jobs) {
  const std::vector<double> grid = config.grid();
  std::vector<std::string> rows(grid.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t begin = 0; begin < grid.size(); begin += width) {
    const std::size_t end = std::min(grid.size(), begin + width);
    std::vector<std::future<std::string>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async,
                                 sweep_row, std::cref(config), grid[i], tol));
    }
    for (std::size_t i = begin; i < end; ++i) rows[i] = batch[i - begin].get();
  }
  std::string out = std::string(kSweepHeader) + "\n";
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!spdlog::get("telerob")) spdlog::set_default_logger(spdlog::stderr_color_mt("telerob"));
  Context ctx;
  Action action;
  std::string command;
  std::string raw_output;

  CLI::App app{"Robustness of teleportation: SDPs, games and discrimination tasks", "telerob"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", ctx.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", ctx.seed, "Random seed");
  app.add_option("--out", ctx.out, "Write output to this file instead of stdout");
  app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--verbose", ctx.verbose, "Log solver iterations");

  const auto leaf = [](CLI::App* parent, const std::string& name, const std::string& help) {
    return parent->add_subcommand(name, help);
  };
  const auto bind = [&](CLI::App* sub, const std::string& name, Action a) {
    sub->callback([&, name, a] {
      command = name;
      action = a;
    });
  };

  // rot
  CLI::App* rot_cmd = app.add_subcommand("rot", "Robustness of teleportation");
  rot_cmd->require_subcommand(1);
  std::string instrument_spec;
  std::string certificate_spec;
  {
    CLI::App* s = leaf(rot_cmd, "compute", "Solve primal and dual programs");
    s->add_option("--instrument", instrument_spec)->required();
    bind(s, "rot compute", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      add_ppt_warning(r, instr.dv(), instr.db());
      const rot::RotPrimalSolution primal = rot::rot_primal(instr, c.tol);
      const rot::RotDualSolution dual = rot::rot_dual(instr, c.tol);
      const double gap = std::abs(primal.value - dual.value);
      if (gap > 10.0 * c.tol) {
        throw SolverError(fmt::format("primal {:.12g} and dual {:.12g} disagree", primal.value,
                                      dual.value));
      }
      r.values = {{"T", 0.5 * (primal.value + dual.value)},
                  {"primal", primal.value},
                  {"dual", dual.value},
                  {"gap", gap}};
      r.objects.objects.emplace("dual", dual);
      r.objects.objects.emplace("primal_certificate", io::Certificate{"rot_primal", primal.certificate});
      r.objects.objects.emplace("dual_certificate", io::Certificate{"rot_dual", dual.certificate});
      int code = finish_certificates(rot::build_primal_problem(instr), primal.certificate,
                                     "primal_certificate", 10.0 * c.tol, r);
      code = std::max(code, finish_certificates(rot::build_dual_problem(instr), dual.certificate,
                                                "dual_certificate", 10.0 * c.tol, r));
      return code;
    });
  }
  {
    CLI::App* s = leaf(rot_cmd, "dual", "Solve the dual program only");
    s->add_option("--instrument", instrument_spec)->required();
    bind(s, "rot dual", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      add_ppt_warning(r, instr.dv(), instr.db());
      const rot::RotDualSolution dual = rot::rot_dual(instr, c.tol);
      r.values = {{"T", dual.value}};
      r.objects.objects.emplace("dual", dual);
      r.objects.objects.emplace("dual_certificate", io::Certificate{"rot_dual", dual.certificate});
      return finish_certificates(rot::build_dual_problem(instr), dual.certificate,
                                 "dual_certificate", 10.0 * c.tol, r);
    });
  }
  double verify_tol = 1e-6;
  {
    CLI::App* s = leaf(rot_cmd, "verify", "Re-check a stored certificate against an instrument");
    s->add_option("--instrument", instrument_spec)->required();
    s->add_option("--certificate", certificate_spec)->required();
    s->add_option("--verify-tol", verify_tol)->check(CLI::PositiveNumber);
    bind(s, "rot verify", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      const auto cert = c.load<io::Certificate>(certificate_spec);
      conic::SdpProblem problem;
      if (cert.program == "rot_primal") {
        problem = rot::build_primal_problem(instr);
      } else if (cert.program == "rot_dual") {
        problem = rot::build_dual_problem(instr);
      } else {
        throw ValidationError(fmt::format("unknown certificate program '{}'", cert.program));
      }
      const conic::CertificateReport rep = conic::verify_certificate(problem, cert.solution, verify_tol);
      r.values = {{"ok", rep.ok ? 1.0 : 0.0},
                  {"primal_violation", rep.primal_violation},
                  {"primal_cone_violation", rep.primal_cone_violation},
                  {"dual_cone_violation", rep.dual_cone_violation},
                  {"duality_gap", rep.duality_gap}};
      for (const std::string& f : rep.failures) r.warnings.push_back(f);
      return rep.ok ? kOk : kFailedValidation;
    });
  }

  // instrument
  CLI::App* instr_cmd = app.add_subcommand("instrument", "Teleportation instruments");
  instr_cmd->require_subcommand(1);
  std::string povm_spec;
  std::string state_spec;
  std::string data_spec;
  std::size_t dim = 2;
  {
    CLI::App* s = leaf(instr_cmd, "build", "Instrument from a measurement and a shared state");
    s->add_option("--povm", povm_spec)->required();
    s->add_option("--state", state_spec)->required();
    bind(s, "instrument build", [&](Context& c, ResultRecord& r) {
      const auto povm = c.load<Povm>(povm_spec);
      const auto state = c.load<DensityMatrix>(state_spec);
      const TeleportationInstrument instr = build_instrument(povm, state);
      r.values = {{"outcomes", static_cast<double>(instr.outcomes())},
                  {"no_signalling_residual", validate_no_signalling(instr.ops(), instr.dv(), instr.db()).residual}};
      r.objects.objects.emplace("instrument", instr);
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(instr_cmd, "fit", "Least-squares fit from tomography data");
    s->add_option("--data", data_spec)->required();
    bind(s, "instrument fit", [&](Context& c, ResultRecord& r) {
      const auto data = c.load<io::FitData>(data_spec);
      const FitResult fit = fit_choi(data.inputs, data.data, data.db);
      r.values = {{"residual", fit.residual}, {"projected", fit.projected ? 1.0 : 0.0}};
      if (!fit.diagnostic.empty()) r.warnings.push_back(fit.diagnostic);
      if (!fit.instrument) return static_cast<int>(kFailedValidation);
      r.objects.objects.emplace("instrument", *fit.instrument);
      return static_cast<int>(kOk);
    });
  }
  {
    CLI::App* s = leaf(instr_cmd, "ideal", "Standard teleportation instrument");
    s->add_option("--d", dim)->check(CLI::Range(2, 16));
    bind(s, "instrument ideal", [&](Context&, ResultRecord& r) {
      r.objects.objects.emplace("instrument", ideal_instrument(dim));
      r.values = {{"d", static_cast<double>(dim)}};
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(instr_cmd, "realize", "Measurement and state reproducing an instrument");
    s->add_option("--instrument", instrument_spec)->required();
    bind(s, "instrument realize", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      const Realization re = realize_from_choi(instr.ops(), instr.dv(), instr.db());
      const TeleportationInstrument back = build_instrument(re.measurement, re.state);
      double err_max = 0.0;
      for (std::size_t a = 0; a < instr.outcomes(); ++a) {
        err_max = std::max(err_max, (back[a] - instr[a]).cwiseAbs().maxCoeff());
      }
      r.values = {{"reconstruction_error", err_max}};
      r.objects.objects.emplace("state", re.state);
      r.objects.objects.emplace("measurement", re.measurement);
      return err_max <= 1e-8 ? kOk : kFailedValidation;
    });
  }

  // game
  CLI::App* game_cmd = app.add_subcommand("game", "Correlation-teleportation games");
  game_cmd->require_subcommand(1);
  std::string dual_spec;
  std::string game_spec;
  std::string family_name = "pauli";
  bool relabel = false;
  {
    CLI::App* s = leaf(game_cmd, "build-from-dual", "Game built from RoT dual witnesses");
    s->add_option("--dual", dual_spec)->required();
    bind(s, "game build-from-dual", [&](Context& c, ResultRecord& r) {
      const auto dual = c.load<rot::RotDualSolution>(dual_spec);
      const games::CorrelationGame g = games::build_game_from_dual(dual);
      r.values = {{"outcomes", static_cast<double>(g.outcomes())}};
      r.objects.objects.emplace("game", g);
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(game_cmd, "score", "Score of an instrument");
    s->add_option("--game", game_spec)->required();
    s->add_option("--instrument", instrument_spec)->required();
    s->add_option("--family", family_name)->check(CLI::IsMember({"identity", "pauli", "seesaw"}));
    s->add_flag("--relabel", relabel, "Also optimize deterministic outcome relabelings");
    bind(s, "game score", [&](Context& c, ResultRecord& r) {
      const auto g = c.load<games::CorrelationGame>(game_spec);
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      r.values = {{"score", games::game_score(g, instr, family_of(family_name), relabel).value}};
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(game_cmd, "classical", "Best classical score");
    s->add_option("--game", game_spec)->required();
    s->add_option("--family", family_name)->check(CLI::IsMember({"identity", "pauli", "seesaw"}));
    bind(s, "game classical", [&](Context& c, ResultRecord& r) {
      const auto g = c.load<games::CorrelationGame>(game_spec);
      add_ppt_warning(r, g.dv(), g.db());
      r.values = {{"classical", games::classical_game_score(g, family_of(family_name), c.tol).value}};
      return kOk;
    });
  }

  // discrim
  CLI::App* disc_cmd = app.add_subcommand("discrim", "Subchannel discrimination");
  disc_cmd->require_subcommand(1);
  std::string e_spec;
  std::size_t fictitious = 10000;
  {
    CLI::App* s = leaf(disc_cmd, "build-from-dual", "Discrimination task built from RoT dual witnesses");
    s->add_option("--dual", dual_spec)->required();
    s->add_option("--n", fictitious, "Fictitious outcome count")->check(CLI::PositiveNumber);
    bind(s, "discrim build-from-dual", [&](Context& c, ResultRecord& r) {
      const auto dual = c.load<rot::RotDualSolution>(dual_spec);
      const discrim::DiscrimBuild b = discrim::build_discrimination_from_dual(dual, fictitious);
      r.values = {{"alpha", b.construction.alpha},
                  {"fictitious_count", static_cast<double>(b.construction.fictitious_count)},
                  {"finite_n_factor", b.construction.finite_n_factor()},
                  {"labels", static_cast<double>(b.instrument.label_count())}};
      r.objects.objects.emplace("discrimination", b.instrument);
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(disc_cmd, "psucc", "Success probability with an instrument");
    s->add_option("--e", e_spec)->required();
    s->add_option("--instrument", instrument_spec)->required();
    bind(s, "discrim psucc", [&](Context& c, ResultRecord& r) {
      const auto e = c.load<discrim::DiscriminationInstrument>(e_spec);
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      r.values = {{"p_succ", discrim::p_succ(e, instr)}};
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(disc_cmd, "classical", "Classical success probabilities");
    s->add_option("--e", e_spec)->required();
    bind(s, "discrim classical", [&](Context& c, ResultRecord& r) {
      const auto e = c.load<discrim::DiscriminationInstrument>(e_spec);
      add_ppt_warning(r, e.dim(), e.dim());
      r.values = {{"ensemble", discrim::classical_p_succ_ensemble(e, c.tol)},
                  {"product", discrim::classical_p_succ_product(e)}};
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(disc_cmd, "ratio", "Advantage over the classical ensemble benchmark");
    s->add_option("--e", e_spec)->required();
    s->add_option("--instrument", instrument_spec)->required();
    bind(s, "discrim ratio", [&](Context& c, ResultRecord& r) {
      const auto e = c.load<discrim::DiscriminationInstrument>(e_spec);
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      add_ppt_warning(r, e.dim(), e.dim());
      const discrim::AdvantageRatio a = discrim::advantage_ratio(e, instr, c.tol);
      r.values = {{"ratio", a.ratio}, {"numerator", a.numerator}, {"denominator", a.denominator}};
      return kOk;
    });
  }

  // sim
  CLI::App* sim_cmd = app.add_subcommand("sim", "Simulation preorders");
  sim_cmd->require_subcommand(1);
  std::string sim_spec;
  simorder::MonotoneOptions mono;
  {
    CLI::App* s = leaf(sim_cmd, "apply", "Apply a classical or quantum simulation");
    s->add_option("--instrument", instrument_spec)->required();
    s->add_option("--sim", sim_spec)->required();
    bind(s, "sim apply", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      std::string name;
      const io::ExperimentFile f = c.file(sim_spec, &name);
      const std::string source = sim_spec.substr(0, sim_spec.find('#'));
      std::optional<TeleportationInstrument> result;
      for (const auto& [key, o] : f.objects) {
        if (!name.empty() && key != name) continue;
        if (const auto* cs = std::get_if<simorder::ClassicalSimulation>(&o)) {
          if (result) throw io::FormatError(source, "several simulations; name one with #name");
          result = simorder::apply_classical_sim(instr, *cs);
        } else if (const auto* qs = std::get_if<simorder::QuantumSimulation>(&o)) {
          if (result) throw io::FormatError(source, "several simulations; name one with #name");
          result = simorder::apply_quantum_sim(instr, *qs);
        }
      }
      if (!result) throw io::FormatError(source, "no simulation object");
      r.values = {{"outcomes", static_cast<double>(result->outcomes())}};
      r.objects.objects.emplace("instrument", *result);
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(sim_cmd, "check", "Sampled monotonicity checks");
    s->add_option("--instrument", instrument_spec)->required();
    s->add_option("--classical", mono.classical_samples);
    s->add_option("--quantum", mono.quantum_samples);
    s->add_option("--games", mono.games);
    s->add_option("--discriminations", mono.discriminations);
    bind(s, "sim check", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      add_ppt_warning(r, instr.dv(), instr.db());
      const simorder::MonotoneReport rep = simorder::check_monotones(instr, mono, c.seed);
      r.values = {{"checks", static_cast<double>(rep.checks)},
                  {"violations", static_cast<double>(rep.violations.size())}};
      for (std::size_t k = 0; k < rep.violations.size(); ++k) {
        const simorder::Violation& v = rep.violations[k];
        const std::string name = fmt::format("violation_{}", k);
        r.warnings.push_back(fmt::format("{}: {} rose from {:.17g} to {:.17g}", name, v.quantity,
                                         v.before, v.after));
        std::visit([&](const auto& recipe) { r.objects.objects.emplace(name, recipe); }, v.recipe);
      }
      return rep.ok() ? kOk : kFailedValidation;
    });
  }

  // fidelity
  std::string inputs_spec;
  {
    CLI::App* s = app.add_subcommand("fidelity", "Average teleportation fidelity");
    s->add_option("--instrument", instrument_spec)->required();
    s->add_option("--inputs", inputs_spec)->required();
    s->add_option("--family", family_name)->check(CLI::IsMember({"identity", "pauli", "seesaw"}));
    bind(s, "fidelity", [&](Context& c, ResultRecord& r) {
      const auto instr = c.load<TeleportationInstrument>(instrument_spec);
      const auto inputs = c.load<InputEnsemble>(inputs_spec);
      r.values = {{"fidelity", games::average_fidelity(instr, inputs, family_of(family_name))}};
      return kOk;
    });
  }

  // sweep
  std::string config_spec;
  unsigned jobs = 1;
  {
    CLI::App* s = app.add_subcommand("sweep", "Isotropic-state sweep as a CSV table");
    s->add_option("--config", config_spec)->required();
    s->add_option("--jobs", jobs, "Rows evaluated concurrently")->check(CLI::Range(1u, 64u));
    bind(s, "sweep", [&](Context& c, ResultRecord& r) {
      const std::string body = io::read_text(config_spec);
      c.note(config_spec, body);
      io::Json j;
      try {
        j = io::Json::parse(body);
      } catch (const io::Json::parse_error& e) {
        throw io::FormatError(config_spec + ":$", e.what());
      }
      SweepConfig config;
      try {
        config = SweepConfig::from_json(j);
      } catch (const io::FormatError& e) {
        throw io::FormatError(config_spec + ":" + e.path(), e.message());
      }
      add_ppt_warning(r, config.d, config.d);
      raw_output = sweep_csv(config, c.tol, jobs);
      return kOk;
    });
  }

  // make
  CLI::App* make_cmd = app.add_subcommand("make", "Standard input objects");
  make_cmd->require_subcommand(1);
  double visibility = 1.0;
  std::size_t outcomes = 4;
  {
    CLI::App* s = leaf(make_cmd, "twirl", "Weyl twirl discrimination task");
    s->add_option("--d", dim)->check(CLI::Range(2, 16));
    bind(s, "make twirl", [&](Context&, ResultRecord& r) {
      r.objects.objects.emplace("twirl", discrim::pauli_twirl(dim));
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(make_cmd, "inputs", "Mutually unbiased basis states");
    s->add_option("--d", dim)->check(CLI::Range(2, 16));
    bind(s, "make inputs", [&](Context&, ResultRecord& r) {
      r.objects.objects.emplace("inputs", mub_states(dim));
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(make_cmd, "isotropic", "Isotropic state of visibility p");
    s->add_option("--d", dim)->check(CLI::Range(2, 16));
    s->add_option("--p", visibility)->check(CLI::Range(0.0, 1.0));
    bind(s, "make isotropic", [&](Context&, ResultRecord& r) {
      r.objects.objects.emplace("state", isotropic_state(dim, visibility));
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(make_cmd, "bell", "Generalized Bell measurement");
    s->add_option("--d", dim)->check(CLI::Range(2, 16));
    bind(s, "make bell", [&](Context&, ResultRecord& r) {
      r.objects.objects.emplace("measurement", bell_povm(dim));
      return kOk;
    });
  }
  {
    CLI::App* s = leaf(make_cmd, "fidelity-game", "Fidelity game of an input ensemble");
    s->add_option("--inputs", inputs_spec)->required();
    s->add_option("--outcomes", outcomes)->check(CLI::PositiveNumber);
    bind(s, "make fidelity-game", [&](Context& c, ResultRecord& r) {
      const auto inputs = c.load<InputEnsemble>(inputs_spec);
      r.objects.objects.emplace("game", games::fidelity_game_of(inputs, outcomes));
      return kOk;
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (!action) {
    err << "no command given\n";
    return kUsage;
  }
  spdlog::set_level(ctx.verbose ? spdlog::level::debug : spdlog::level::warn);

  ResultRecord record;
  int code = kOk;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    for (const std::string& a : args) ctx.note("arg", a);
    code = action(ctx, record);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DimensionError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailedValidation;
  }
  record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::string body;
  if (!raw_output.empty()) {
    body = raw_output;
  } else {
    record.command = command;
    record.inputs_digest = io::digest(ctx.digest_input);
    body = ctx.format == "csv" ? record.to_csv() : record.to_json().dump(2) + "\n";
  }
  if (ctx.out.empty()) {
    out << body;
  } else {
    std::ofstream f(ctx.out, std::ios::binary);
    if (!f) {
      err << "cannot write " << ctx.out << '\n';
      return kInvalidInput;
    }
    f << body;
  }
  for (const std::string& w : record.warnings) err << "warning: " << w << '\n';
  return code;
}

}  // namespace telerob::cli
