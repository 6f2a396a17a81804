#include "qwitness/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwitness/discord.hpp"
#include "qwitness/interferometer.hpp"
#include "qwitness/io.hpp"
#include "qwitness/scan.hpp"

namespace qwitness {

namespace {

using Json = nlohmann::json;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  unsigned jobs = 1;
  std::string format = "json";
  Index cap = kDefaultCircuitCap;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("QWITNESS_SEED")) {
      try {
        std::size_t used = 0;
        const std::uint64_t s = std::stoull(env, &used);
        if (used == std::string(env).size()) return s;
      } catch (const std::exception&) {
      }
      throw InvalidInput(std::string("QWITNESS_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
  }

  WitnessTolerances tolerances() const {
    WitnessTolerances t;
    if (tol) {
      if (!(*tol > 0)) throw InvalidInput("--tol must be positive");
      t.witness = t.null = t.commutator = *tol;
    }
    return t;
  }
};

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidInput(what + ": '" + tok + "' is not a number");
    }
  }
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) v.push_back(tok);
  return v;
}

// "bloch:x,y,z", "mixed:d", or a JSON state file.
DensityOperator load_state(const std::string& spec, const WitnessTolerances& tol) {
  if (spec.rfind("bloch:", 0) == 0) {
    const auto v = parse_numbers(spec.substr(6), "bloch");
    if (v.size() != 3) throw InvalidInput("bloch: expected three components");
    return bloch_to_state({v[0], v[1], v[2]});
  }
  if (spec.rfind("mixed:", 0) == 0) {
    const auto v = parse_numbers(spec.substr(6), "mixed");
    if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) {
      throw InvalidInput("mixed: expected a positive integer dimension");
    }
    return maximally_mixed(static_cast<Index>(v[0]));
  }
  const Json j = io::read_json_file(spec);
  return make_density(io::matrix_from_json(j), tol.state);
}

PureState load_pure(const std::string& spec) {
  if (spec.rfind("bloch:", 0) == 0) {
    const auto rho = load_state(spec, {});
    if (std::abs(purity(rho) - 1.0) > 1e-9) throw InvalidInput("probe: Bloch vector is not a unit vector");
    return PureState::normalized(rho.spectrum().eigenvectors.col(0));
  }
  return io::pure_from_json(io::read_json_file(spec));
}

void scalar_csv(const Json& j, std::ostream& out) {
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it->is_structured()) keys.push_back(it.key());
  }
  for (std::size_t k = 0; k < keys.size(); ++k) out << (k ? "," : "") << keys[k];
  out << '\n';
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const Json& v = j.at(keys[k]);
    out << (k ? "," : "") << (v.is_string() ? v.get<std::string>() : v.dump());
  }
  out << '\n';
}

void emit(const Json& j, const Globals& g, std::ostream& out) {
  if (g.format == "csv") {
    scalar_csv(j, out);
  } else if (g.format == "jsonl") {
    out << j.dump() << '\n';
  } else {
    out << j.dump(2) << '\n';
  }
}

int verdict_code(Verdict v) {
  return v == Verdict::NonpositiveWitnessed ? exit_code::kWitnessed : exit_code::kOk;
}

Json plan_json(const AmplificationPlan& p) {
  return Json{{"n", p.n},
              {"achieved_epsilon", p.achieved_epsilon},
              {"requested_epsilon", p.requested_epsilon},
              {"degenerate", p.degenerate},
              {"capped", p.capped}};
}

// --- commands ---------------------------------------------------------------------------

struct WitnessArgs {
  std::vector<std::string> states;
};

int cmd_witness(const WitnessArgs& a, const Globals& g, std::ostream& out) {
  const WitnessTolerances tol = g.tolerances();
  const DensityOperator r1 = load_state(a.states.at(0), tol);
  const DensityOperator r2 = load_state(a.states.at(1), tol);
  if (r1.dim() != r2.dim()) throw DimensionError("witness: states differ in dimension");
  Json j;
  Verdict v;
  if (std::abs(purity(r1) - 1.0) <= 1e-12) {
    const PureMixedResult r = pure_mixed_test(PureState::normalized(r1.spectrum().eigenvectors.col(0)), r2, tol);
    j = io::report_to_json(r.report, tol);
    j["closed_form_purity"] = r.closed_form_purity ? Json(*r.closed_form_purity) : Json(nullptr);
    j["commutator_norm"] = r.commutator_norm;
    v = r.report.verdict;
  } else {
    const WitnessReport r = witness_anticommutator(r1, r2, tol);
    j = io::report_to_json(r, tol);
    j["commutator_norm"] = linalg::commutator(r1.matrix(), r2.matrix()).norm();
    v = r.verdict;
  }
  j["version"] = std::string(version());
  emit(j, g, out);
  return verdict_code(v);
}

struct NestedArgs {
  std::vector<std::string> states;
  double target = 0.05;
  bool no_tighten = false;
};

int cmd_nested(const NestedArgs& a, const Globals& g, std::ostream& out) {
  const WitnessTolerances tol = g.tolerances();
  const DensityOperator s1 = load_state(a.states.at(0), tol);
  const DensityOperator s2 = load_state(a.states.at(1), tol);
  NestedOptions opts;
  opts.tighten = !a.no_tighten;
  const NestedResult r = nested_witness(s1, s2, a.target, tol, opts);
  Json j;
  j["m"] = r.plan1.n;
  j["n"] = r.plan2.n;
  j["plan1"] = plan_json(r.plan1);
  j["plan2"] = plan_json(r.plan2);
  j["abs_f"] = r.overlap.abs_f();
  j["g1"] = r.overlap.g1;
  j["g2"] = r.overlap.g2;
  j["condition_lhs"] = r.condition_lhs;
  j["condition_rhs"] = r.condition_rhs;
  j["condition_met"] = r.condition_met;
  j["tightenings"] = r.tightenings;
  j["report"] = io::report_to_json(r.report, tol);
  j["min_eigenvalue"] = r.report.min_eigenvalue;
  j["verdict"] = std::string(to_string(r.report.verdict));
  j["version"] = std::string(version());
  emit(j, g, out);
  return verdict_code(r.report.verdict);
}

struct AmplifyArgs {
  std::string state;
  double target = 0.05;
  std::optional<std::uint64_t> n;
};

int cmd_amplify(const AmplifyArgs& a, const Globals& g, std::ostream& out) {
  WitnessTolerances tol = g.tolerances();
  const DensityOperator rho = load_state(a.state, tol);
  Json j;
  if (a.n) {
    const DensityOperator amp = amplify(rho, *a.n);
    j["n"] = *a.n;
    j["epsilon"] = amplified_epsilon(rho.spectrum().eigenvalues, *a.n);
    j["state"] = io::state_to_json(amp);
    j["version"] = std::string(version());
    emit(j, g, out);
    return exit_code::kOk;
  }
  const AmplificationPlan p = plan_amplification(rho, a.target, tol);
  j = plan_json(p);
  j["version"] = std::string(version());
  emit(j, g, out);
  if (p.capped) return exit_code::kUnreachable;
  if (p.degenerate) return exit_code::kDegenerate;
  return exit_code::kOk;
}

struct CircuitArgs {
  std::vector<std::string> states;
  std::string probe;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> copies;
  double sigmas = 5.0;
};

int cmd_circuit(const CircuitArgs& a, const Globals& g, std::ostream& out) {
  if (a.shots && *a.shots < 1) throw InvalidInput("circuit: --shots must be at least 1");
  if (a.copies && *a.copies < 1) throw InvalidInput("circuit: --copies must be at least 1");
  const WitnessTolerances tol = g.tolerances();
  ShiftExperiment e;
  for (const auto& s : a.states) e.copies.push_back(load_state(s, tol));
  if (a.copies) {
    if (e.copies.size() != 1) throw InvalidInput("circuit: --copies needs exactly one state");
    e.copies.assign(*a.copies, e.copies.front());
  }
  e.probe = load_pure(a.probe);
  e.capacity = g.cap;
  e.seed = g.resolved_seed();

  const double exact = run_circuit_exact(e);
  Json j;
  j["exact"] = exact;
  j["imaginary"] = circuit_imaginary_part(e);
  j["copies"] = e.copies.size();
  if (a.shots) {
    const SampledEstimate s = sample_control(exact, static_cast<std::uint64_t>(*a.shots), e.seed);
    j["estimate"] = s.estimate;
    j["stderr"] = s.stderr_estimate;
    j["shots"] = s.shots;
    j["seed"] = e.seed;
    j["confidence_sigmas"] = a.sigmas;
    try {
      j["shots_to_resolve"] = shots_to_resolve(exact, a.sigmas);
    } catch (const UnresolvableError&) {
      j["shots_to_resolve"] = nullptr;
    }
  }
  j["version"] = std::string(version());
  emit(j, g, out);
  return exit_code::kOk;
}

struct DiscordArgs {
  std::string state = "bell";
  std::string dims;
  std::string ops = "z,x";
  std::string outcomes = "0,+";
  double target = 0.05;
};

QubitBasis parse_basis(const std::string& s) {
  if (s == "z") return QubitBasis::Z;
  if (s == "x") return QubitBasis::X;
  if (s == "y") return QubitBasis::Y;
  throw InvalidInput("discord-demo: unknown basis '" + s + "' (z, x, y)");
}

Index parse_outcome(QubitBasis b, const std::string& s) {
  if (s == "0" || s == "1") return s == "0" ? 0 : 1;
  if (b == QubitBasis::X && (s == "+" || s == "-")) return s == "+" ? 0 : 1;
  if (b == QubitBasis::Y && (s == "+i" || s == "-i")) return s == "+i" ? 0 : 1;
  throw InvalidInput("discord-demo: outcome '" + s + "' does not fit the basis");
}

BipartiteState load_bipartite(const DiscordArgs& a, const WitnessTolerances& tol) {
  if (a.state == "bell") return bell_state();
  if (a.state.rfind("werner:", 0) == 0) {
    const auto v = parse_numbers(a.state.substr(7), "werner");
    if (v.size() != 1) throw InvalidInput("werner: expected one mixing parameter");
    return werner_state(v[0]);
  }
  const DensityOperator rho = load_state(a.state, tol);
  Index da = 0;
  Index db = 0;
  if (!a.dims.empty()) {
    const auto v = parse_numbers(a.dims, "dims");
    if (v.size() != 2) throw InvalidInput("--dims: expected d_A,d_B");
    da = static_cast<Index>(v[0]);
    db = static_cast<Index>(v[1]);
  } else {
    const auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(rho.dim()))));
    if (r * r != rho.dim()) throw InvalidInput("discord-demo: give --dims for a non-square split");
    da = db = r;
  }
  return BipartiteState(rho, da, db);
}

int cmd_discord(const DiscordArgs& a, const Globals& g, std::ostream& out) {
  const WitnessTolerances tol = g.tolerances();
  const BipartiteState rho = load_bipartite(a, tol);
  if (rho.dim_a() != 2) throw InvalidInput("discord-demo: basis measurements need a qubit A");
  const auto ops = split(a.ops);
  const auto outs = split(a.outcomes);
  if (ops.size() != 2 || outs.size() != 2) {
    throw InvalidInput("discord-demo: --ops and --outcomes take two comma-separated entries");
  }
  std::vector<LocalOperation> chosen;
  for (int k = 0; k < 2; ++k) {
    const QubitBasis b = parse_basis(ops[k]);
    const Index idx = parse_outcome(b, outs[k]);
    chosen.push_back(LocalOperation::projector(qubit_basis(b).col(idx), ops[k] + ":" + outs[k]));
  }
  const ProtocolResult r = protocol_demo(rho, chosen[0], chosen[1], a.target, tol);
  Json j = io::report_to_json(r.report, tol);
  j["conditionals"] = Json::array(
      {Json{{"label", chosen[0].label},
            {"probability", r.first.probability},
            {"state", io::state_to_json(*r.first.state)}},
       Json{{"label", chosen[1].label},
            {"probability", r.second.probability},
            {"state", io::state_to_json(*r.second.state)}}});
  j["commutator_norm"] = r.commutator_norm;
  if (r.nested) {
    j["m"] = r.nested->plan1.n;
    j["n"] = r.nested->plan2.n;
    j["condition_met"] = r.nested->condition_met;
  }
  j["version"] = std::string(version());
  emit(j, g, out);
  return verdict_code(r.report.verdict);
}

struct ScanArgs {
  std::string kind;
  std::uint64_t trials = 1000;
  Index dmin = 2;
  Index dmax = 6;
  Index grid = 100;
  double target = 0.05;
  bool timing = false;
  std::string csv_path;
};

int cmd_scan(const ScanArgs& a, const Globals& g, std::ostream& out) {
  ScanConfig c;
  c.kind = parse_scan_kind(a.kind);
  c.trials = a.trials;
  c.dmin = a.dmin;
  c.dmax = a.dmax;
  c.grid = a.grid;
  c.seed = g.resolved_seed();
  c.jobs = g.jobs;
  c.tol = g.tolerances();
  c.target_epsilon = a.target;
  c.timing = a.timing;
  const ScanResult r = run_scan(c);
  if (g.format == "csv") {
    write_csv(r, out);
  } else {
    write_jsonl(r, out);
  }
  if (!a.csv_path.empty()) {
    std::ofstream f(a.csv_path);
    if (!f) throw InvalidInput("cannot write '" + a.csv_path + "'");
    write_csv(r, f);
  }
  return exit_code::kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantumness witnesses for pairs of quantum states", "qwitness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed (default: $QWITNESS_SEED, else 0)");
  app.add_option("--tol", g.tol, "witness/null/commutator tolerance (default 1e-10)");
  app.add_option("--jobs", g.jobs, "worker threads for scans")->check(CLI::Range(1u, 1024u));
  app.add_option("--format", g.format, "json | jsonl | csv")
      ->check(CLI::IsMember({"json", "jsonl", "csv"}));
  app.add_option("--cap", g.cap, "capacity cap on the simulated circuit dimension")
      ->check(CLI::PositiveNumber);

  WitnessArgs wa;
  auto* witness = app.add_subcommand("witness", "test {rho1, rho2} for a negative eigenvalue");
  witness->add_option("states", wa.states, "two states: JSON files, bloch:x,y,z or mixed:d")
      ->required()
      ->expected(2);

  NestedArgs na;
  auto* nested = app.add_subcommand("nested", "amplify two mixed states, then witness");
  nested->add_option("states", na.states, "two states")->required()->expected(2);
  nested->add_option("--target", na.target, "initial target epsilon");
  nested->add_flag("--no-tighten", na.no_tighten, "do not halve the target when the condition fails");

  AmplifyArgs aa;
  auto* amp = app.add_subcommand("amplify", "plan or apply purity amplification");
  amp->add_option("state", aa.state, "state")->required();
  amp->add_option("--target", aa.target, "target epsilon");
  amp->add_option("--n", aa.n, "apply n-fold amplification instead of planning")
      ->check(CLI::PositiveNumber);

  CircuitArgs ca;
  auto* circuit = app.add_subcommand("circuit", "simulate the controlled-SHIFT interferometer");
  circuit->add_option("--states", ca.states, "register states, in order")->required();
  circuit->add_option("--probe", ca.probe, "probe pure state (JSON, or witness output)")->required();
  circuit->add_option("--shots", ca.shots, "sample the control qubit this many times");
  circuit->add_option("--copies", ca.copies, "replicate a single state l times");
  circuit->add_option("--sigmas", ca.sigmas, "confidence for the shot recommendation");

  DiscordArgs da;
  auto* discord = app.add_subcommand("discord-demo", "remote preparation and witness on B");
  discord->add_option("--state", da.state, "bell, werner:p, or a JSON file");
  discord->add_option("--dims", da.dims, "d_A,d_B for a file state");
  discord->add_option("--ops", da.ops, "two bases among z, x, y");
  discord->add_option("--outcomes", da.outcomes, "two outcomes (0/1, +/-, +i/-i)");
  discord->add_option("--target", da.target, "initial target epsilon when amplifying");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "seeded randomized verification scans");
  scan->add_option("kind", sa.kind, "theorem1 | theorem3 | bloch | lemma1 | discord")->required();
  scan->add_option("--trials", sa.trials, "number of trials")->check(CLI::PositiveNumber);
  scan->add_option("--dmin", sa.dmin, "smallest dimension");
  scan->add_option("--dmax", sa.dmax, "largest dimension");
  scan->add_option("--grid", sa.grid, "bloch grid size per axis")->check(CLI::PositiveNumber);
  scan->add_option("--target", sa.target, "target epsilon (theorem3, discord)");
  scan->add_flag("--timing", sa.timing, "record wall time in the summary");
  scan->add_option("--csv", sa.csv_path, "also write CSV rows to this file");

  for (auto* sub : {witness, nested, amp, circuit, discord, scan}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kInput;
  }

  try {
    if (*witness) return cmd_witness(wa, g, out);
    if (*nested) return cmd_nested(na, g, out);
    if (*amp) return cmd_amplify(aa, g, out);
    if (*circuit) return cmd_circuit(ca, g, out);
    if (*discord) return cmd_discord(da, g, out);
    if (*scan) return cmd_scan(sa, g, out);
  } catch (const CommutingInputs& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kCommuting;
  } catch (const DegenerateSpectrum& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kDegenerate;
  } catch (const ConditionUnreachable& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kUnreachable;
  } catch (const BoundaryError& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kUnreachable;
  } catch (const NullOutcome& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kNullOutcome;
  } catch (const CapacityError& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kCapacity;
  } catch (const ConvergenceError& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kNumerical;
  } catch (const AgreementError& e) {
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kNumerical;
  } catch (const Error& e) {
    // Validation family: InvalidInput, DimensionError, state-invariant violations.
    err << "qwitness: " << e.what() << '\n';
    return exit_code::kInput;
  } catch (const std::exception& e) {
    err << "qwitness: internal error: " << e.what() << '\n';
    return exit_code::kInternal;
  }
  return exit_code::kInternal;
}

}  // namespace qwitness
