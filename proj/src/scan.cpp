#include "qwitness/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "qwitness/discord.hpp"

namespace qwitness {

using Json = nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Full-rank state whose spectrum has no near-degenerate pair.
DensityOperator nondegenerate_density(Index d, Rng& rng, double rel_gap = 1e-6) {
  for (;;) {
    DensityOperator rho = random_density(d, d, rng);
    const RealVector& ev = rho.spectrum().eigenvalues;
    bool ok = true;
    for (Index k = 0; k + 1 < ev.size(); ++k) {
      if (ev(k) - ev(k + 1) <= rel_gap * ev(0)) ok = false;
    }
    if (ok) return rho;
  }
}

Index pick_dim(const ScanConfig& c, std::uint64_t trial) {
  const auto span = static_cast<std::uint64_t>(c.dmax - c.dmin + 1);
  return c.dmin + static_cast<Index>(trial % span);
}

Json error_record(Json rec, const std::exception& e) {
  rec["error"] = e.what();
  return rec;
}

Json theorem1_trial(const ScanConfig& c, std::uint64_t i) {
  Rng rng(c.seed, i);
  const Index d = pick_dim(c, i);
  const PureState psi = random_pure(d, rng);
  const DensityOperator rho2 = nondegenerate_density(d, rng);
  Json rec{{"trial", i}, {"d", d}};
  try {
    const PureMixedResult r = pure_mixed_test(psi, rho2, c.tol);
    const bool noncommuting = r.commutator_norm > c.tol.commutator;
    const bool witnessed = r.report.verdict == Verdict::NonpositiveWitnessed;
    rec["commutator_norm"] = r.commutator_norm;
    rec["min_eigenvalue"] = r.report.min_eigenvalue;
    rec["verdict"] = std::string(to_string(r.report.verdict));
    double deviation = 0;
    if (r.closed_form_purity && r.report.purity_criterion) {
      deviation = std::abs(*r.closed_form_purity - *r.report.purity_criterion);
      rec["closed_form_purity"] = *r.closed_form_purity;
      rec["direct_purity"] = *r.report.purity_criterion;
    }
    rec["purity_deviation"] = deviation;
    rec["counterexample"] = noncommuting != witnessed;
  } catch (const AgreementError& e) {
    rec = error_record(std::move(rec), e);
    rec["purity_deviation"] = e.margin();
    rec["counterexample"] = true;
  }
  return rec;
}

Json theorem3_trial(const ScanConfig& c, std::uint64_t i) {
  Rng rng(c.seed, i);
  const Index d = pick_dim(c, i);
  const DensityOperator s1 = nondegenerate_density(d, rng);
  const DensityOperator s2 = nondegenerate_density(d, rng);
  Json rec{{"trial", i}, {"d", d}};
  try {
    const NestedResult r = nested_witness(s1, s2, c.target_epsilon, c.tol);
    rec["m"] = r.plan1.n;
    rec["n"] = r.plan2.n;
    rec["eps1"] = r.overlap.eps1;
    rec["eps2"] = r.overlap.eps2;
    rec["abs_f"] = r.overlap.abs_f();
    rec["condition_met"] = r.condition_met;
    rec["condition_lhs"] = r.condition_lhs;
    rec["condition_rhs"] = r.condition_rhs;
    rec["tightenings"] = r.tightenings;
    rec["min_eigenvalue"] = r.report.min_eigenvalue;
    rec["verdict"] = std::string(to_string(r.report.verdict));
    const bool witnessed = r.report.verdict == Verdict::NonpositiveWitnessed;
    rec["gap_case"] = !r.condition_met && witnessed;
    rec["counterexample"] = r.condition_met && !witnessed;
  } catch (const Error& e) {
    rec = error_record(std::move(rec), e);
    rec["condition_met"] = false;
    rec["gap_case"] = false;
    rec["counterexample"] = false;
  }
  return rec;
}

BlochVector random_direction(Rng& rng, double r) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * kPi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * z};
}

Json bloch_trial(const ScanConfig& c, std::uint64_t i) {
  Rng rng(c.seed, i);
  const auto g = static_cast<std::uint64_t>(c.grid);
  const double step = g > 1 ? 1.0 / static_cast<double>(g - 1) : 0.0;
  const double r1 = static_cast<double>(i / g) * step;
  const double r2 = static_cast<double>(i % g) * step;
  const BlochVector b1 = random_direction(rng, r1);
  const BlochVector b2 = random_direction(rng, r2);
  const bool condition = qubit_bloch_condition(b1, b2);
  const WitnessReport r = witness_anticommutator(bloch_to_state(b1), bloch_to_state(b2), c.tol);
  Json rec{{"trial", i},
           {"r1", r1},
           {"r2", r2},
           {"dot", b1.dot(b2)},
           {"condition", condition},
           {"min_eigenvalue", r.min_eigenvalue},
           {"verdict", std::string(to_string(r.verdict))}};
  rec["positive_without_condition"] = !condition && r.min_eigenvalue >= -c.tol.witness;
  rec["counterexample"] = condition && r.min_eigenvalue < -c.tol.witness;
  return rec;
}

// Modes: 0 generic pair, 1 rho2 supported on psi's complement (null anticommutator),
// 2 the same mixed with a random state at weight 1e-11 (near the null threshold).
Json lemma1_trial(const ScanConfig& c, std::uint64_t i) {
  Rng rng(c.seed, i);
  const Index d = pick_dim(c, i);
  const int mode = static_cast<int>(i % 3);
  const PureState psi = random_pure(d, rng);
  ComplexMatrix rho2;
  if (mode == 0) {
    rho2 = random_density(d, d, rng).matrix();
  } else {
    const ComplexMatrix q = ComplexMatrix::Identity(d, d) - psi.projector();
    const ComplexMatrix g = q * random_density(d, d, rng).matrix() * q;
    rho2 = g / g.trace().real();
    if (mode == 2) {
      const double w = 1e-11;
      rho2 = (1.0 - w) * rho2 + w * random_density(d, d, rng).matrix();
    }
  }
  const DensityOperator r2 = make_density(rho2, c.tol.state);
  const ComplexMatrix p = psi.projector();
  const double anti = linalg::anticommutator(p, r2.matrix()).norm();
  const double prod = (p * r2.matrix()).norm();
  const bool null = anti <= c.tol.null;
  return Json{{"trial", i},
              {"d", d},
              {"mode", mode},
              {"anticommutator_norm", anti},
              {"product_norm", prod},
              {"null", null},
              {"counterexample", null && prod > 10.0 * c.tol.null}};
}

LocalOperation random_rank1(Rng& rng, const std::string& label) {
  return LocalOperation::projector(random_unitary(2, rng).col(0), label);
}

// Even trials: classical-quantum state with conditionals diagonal in one random basis.
// Odd trials: product state. Neither may yield a witnessed verdict or a noncommuting pair.
Json discord_trial(const ScanConfig& c, std::uint64_t i) {
  Rng rng(c.seed, i);
  const bool cq = i % 2 == 0;
  std::optional<BipartiteState> rho;
  if (cq) {
    const ComplexMatrix u = random_unitary(2, rng);
    std::vector<DensityOperator> conds;
    for (int k = 0; k < 2; ++k) {
      RealVector w(2);
      w << rng.uniform(), rng.uniform();
      w /= w.sum();
      conds.push_back(DensityOperator::from_spectrum(w, u));
    }
    const double p = 0.1 + 0.8 * rng.uniform();
    const double probs[2] = {p, 1.0 - p};
    rho.emplace(classical_quantum_state(probs, conds));
  } else {
    const DensityOperator a = random_density(2, 2, rng);
    const DensityOperator b = random_density(2, 2, rng);
    rho.emplace(product_state(a, b));
  }
  const LocalOperation op1 = random_rank1(rng, "op1");
  const LocalOperation op2 = random_rank1(rng, "op2");
  const auto family = projective_measurement(random_unitary(2, rng), "m");

  Json rec{{"trial", i}, {"corpus", cq ? "classical_quantum" : "product"}};
  const ConditionalEnsemble ens = commutation_scan(*rho, family, c.tol);
  rec["max_commutator_norm"] = ens.max_commutator_norm;
  rec["noncommuting_found"] = ens.noncommuting_found;
  bool witnessed = false;
  try {
    const ProtocolResult r = protocol_demo(*rho, op1, op2, c.target_epsilon, c.tol);
    rec["commutator_norm"] = r.commutator_norm;
    rec["min_eigenvalue"] = r.report.min_eigenvalue;
    rec["verdict"] = std::string(to_string(r.report.verdict));
    witnessed = r.report.verdict == Verdict::NonpositiveWitnessed;
  } catch (const Error& e) {
    rec = error_record(std::move(rec), e);
  }
  rec["counterexample"] = witnessed || ens.noncommuting_found;
  return rec;
}

std::vector<std::string> columns_for(ScanKind k) {
  switch (k) {
    case ScanKind::Theorem1:
      return {"trial", "d", "commutator_norm", "min_eigenvalue", "verdict", "purity_deviation",
              "counterexample"};
    case ScanKind::Theorem3:
      return {"trial", "d", "m", "n", "abs_f", "condition_met", "condition_lhs", "condition_rhs",
              "min_eigenvalue", "verdict", "counterexample"};
    case ScanKind::Bloch:
      return {"r1", "r2", "condition", "min_eigenvalue"};
    case ScanKind::Lemma1:
      return {"trial", "d", "mode", "anticommutator_norm", "product_norm", "null",
              "counterexample"};
    case ScanKind::Discord:
      return {"trial", "corpus", "commutator_norm", "min_eigenvalue", "verdict",
              "noncommuting_found", "counterexample"};
  }
  return {};
}

std::uint64_t count_true(const std::vector<Json>& recs, const char* key) {
  return static_cast<std::uint64_t>(std::count_if(recs.begin(), recs.end(), [&](const Json& r) {
    return r.contains(key) && r.at(key).is_boolean() && r.at(key).get<bool>();
  }));
}

}  // namespace

std::string_view version() { return QWITNESS_VERSION; }

ScanKind parse_scan_kind(const std::string& s) {
  if (s == "theorem1") return ScanKind::Theorem1;
  if (s == "theorem3") return ScanKind::Theorem3;
  if (s == "bloch") return ScanKind::Bloch;
  if (s == "lemma1") return ScanKind::Lemma1;
  if (s == "discord") return ScanKind::Discord;
  throw InvalidInput("unknown scan kind '" + s + "'");
}

std::string_view to_string(ScanKind k) {
  switch (k) {
    case ScanKind::Theorem1: return "theorem1";
    case ScanKind::Theorem3: return "theorem3";
    case ScanKind::Bloch: return "bloch";
    case ScanKind::Lemma1: return "lemma1";
    case ScanKind::Discord: return "discord";
  }
  return "?";
}

ScanResult run_scan(const ScanConfig& cfg) {
  if (cfg.dmin < 2 || cfg.dmax < cfg.dmin) throw InvalidInput("scan: need 2 <= dmin <= dmax");
  if (cfg.kind == ScanKind::Bloch ? cfg.grid < 1 : cfg.trials < 1) {
    throw InvalidInput("scan: need at least one trial");
  }
  const auto start = std::chrono::steady_clock::now();

  std::function<Json(const ScanConfig&, std::uint64_t)> trial;
  std::uint64_t n = cfg.trials;
  switch (cfg.kind) {
    case ScanKind::Theorem1: trial = theorem1_trial; break;
    case ScanKind::Theorem3: trial = theorem3_trial; break;
    case ScanKind::Lemma1: trial = lemma1_trial; break;
    case ScanKind::Discord: trial = discord_trial; break;
    case ScanKind::Bloch:
      trial = bloch_trial;
      n = static_cast<std::uint64_t>(cfg.grid) * static_cast<std::uint64_t>(cfg.grid);
      break;
  }

  ScanResult res;
  res.records.resize(n);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < n; i = next++) res.records[i] = trial(cfg, i);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  res.counterexamples = count_true(res.records, "counterexample");
  res.csv_columns = columns_for(cfg.kind);
  Json& s = res.summary;
  s["summary"] = true;
  s["kind"] = std::string(to_string(cfg.kind));
  s["trials"] = n;
  s["counterexamples"] = res.counterexamples;
  s["errors"] = static_cast<std::uint64_t>(std::count_if(
      res.records.begin(), res.records.end(), [](const Json& r) { return r.contains("error"); }));
  switch (cfg.kind) {
    case ScanKind::Theorem1: {
      double worst = 0;
      for (const auto& r : res.records) worst = std::max(worst, r.at("purity_deviation").get<double>());
      s["max_purity_deviation"] = worst;
      break;
    }
    case ScanKind::Theorem3:
      s["condition_met"] = count_true(res.records, "condition_met");
      s["gap_cases"] = count_true(res.records, "gap_case");
      s["target_epsilon"] = cfg.target_epsilon;
      break;
    case ScanKind::Bloch:
      s["grid"] = cfg.grid;
      s["positive_without_condition"] = count_true(res.records, "positive_without_condition");
      break;
    case ScanKind::Lemma1:
      s["null_cases"] = count_true(res.records, "null");
      break;
    case ScanKind::Discord:
      s["note"] = "no violation found in " + std::to_string(n) + " trials";
      break;
  }
  s["seed"] = cfg.seed;
  s["version"] = std::string(version());
  if (cfg.timing) {
    s["elapsed_ms"] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  }
  return res;
}

void write_jsonl(const ScanResult& r, std::ostream& out) {
  for (const auto& rec : r.records) out << rec.dump() << '\n';
  out << r.summary.dump() << '\n';
}

void write_csv(const ScanResult& r, std::ostream& out) {
  for (std::size_t k = 0; k < r.csv_columns.size(); ++k) {
    out << (k ? "," : "") << r.csv_columns[k];
  }
  out << '\n';
  for (const auto& rec : r.records) {
    for (std::size_t k = 0; k < r.csv_columns.size(); ++k) {
      if (k) out << ',';
      const auto it = rec.find(r.csv_columns[k]);
      if (it == rec.end() || it->is_null()) continue;
      out << (it->is_string() ? it->get<std::string>() : it->dump());
    }
    out << '\n';
  }
}

}  // namespace qwitness
