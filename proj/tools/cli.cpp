#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <random>

#include <CLI11.hpp>

#include "model_file.hpp"

namespace qfl::cli {

namespace {

using Eigen::Index;

struct Outcome {
  int code = kOk;
  json report;
  std::string error;
};

int classify(const std::exception_ptr& ep, std::string& message) {
  try {
    std::rethrow_exception(ep);
  } catch (const NumericalFailure& e) {
    message = e.what();
    return kNumericalError;
  } catch (const NonUniqueStationary& e) {
    message = std::string("no unique stationary state: ") + e.what();
    return kNumericalError;
  } catch (const NotPsd& e) {
    message = e.what();
    return kNumericalError;
  } catch (const std::exception& e) {
    message = e.what();
    return kInputError;
  }
}

template <class F>
Outcome guarded(F&& f) {
  Outcome o;
  try {
    o.report = f();
  } catch (...) {
    o.code = classify(std::current_exception(), o.error);
  }
  return o;
}

void add_tolerance_flags(CLI::App* app, Tolerances& tol) {
  app->add_option("--tol-structural", tol.structural, "structural validation threshold");
  app->add_option("--tol-numeric", tol.numeric, "reconstruction residual threshold");
  app->add_option("--tol-pivot", tol.singular_pivot, "relative Lyapunov pivot threshold");
  app->add_option("--tol-rank-factor", tol.rank_factor, "numerical rank safety factor");
  app->add_option("--tol-cluster-gap", tol.cluster_gap, "eigenvalue cluster gap");
  app->add_option("--tol-pin", tol.pin, "support pinning threshold");
}

json metadata(const Model& m, const Tolerances& tol) {
  return {{"model", m.name}, {"spec_hash", spec_hash(m.spec)}, {"tolerances", to_json(tol)}};
}

json real_list(const RealVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Matrix small_of(const Matrix& majorana) {
  return small_from_full({majorana, Basis::majorana}).entries;
}

RealVector occupations(const Matrix& small) { return small.diagonal().real(); }

RealVector currents(const Matrix& small) {
  const Index L = small.rows();
  RealVector c(std::max<Index>(L - 1, 0));
  for (Index i = 0; i + 1 < L; ++i) c(i) = small(i, i + 1).imag();
  return c;
}

json check_report(const std::string& path, const Tolerances& tol) {
  const Model m = resolve(read_model_file(path), tol);
  json r = metadata(m, tol);
  r["ergodicity"] = to_json(ergodicity(m.spec, tol));
  return r;
}

json stationary_report(const std::string& path, bool full, const Tolerances& tol) {
  const Model m = resolve(read_model_file(path), tol);
  Matrix small;
  Matrix majorana;
  double residual;
  if (m.gauge_invariant) {
    const GaugeInvariantSpec& gi = *m.gauge_invariant;
    small = stationary_gauge_invariant(gi, tol).entries;
    const Matrix g = gi.drift();
    const Matrix p = gi.inhomogeneity();
    residual = max_abs(g * small + small * g.adjoint() + p);
    if (full) majorana = to_majorana(full_from_small({small}).entries);
  } else {
    majorana = stationary(m.spec, tol).entries;
    small = small_of(majorana);
    const Matrix& g = m.spec.drift();
    residual = max_abs(g * majorana + majorana * g.adjoint() + m.spec.inhomogeneity());
  }
  json r = metadata(m, tol);
  json s = {{"occupations", real_list(occupations(small))},
            {"currents", real_list(currents(small))},
            {"residual", residual}};
  if (full) {
    s["matrix"] = {{"basis", "majorana"},
                   {"rows", majorana.rows()},
                   {"entries", matrix_to_json(majorana)}};
  }
  r["stationary"] = s;
  return r;
}

int emit(const std::vector<Outcome>& outcomes, std::ostream& out, std::ostream& err) {
  int code = kOk;
  for (const Outcome& o : outcomes) {
    if (o.code != kOk) err << "error: " << o.error << "\n";
    code = std::max(code, o.code);
  }
  if (outcomes.size() == 1) {
    if (outcomes[0].code == kOk) out << outcomes[0].report.dump(2) << "\n";
    return code;
  }
  json all = json::array();
  for (const Outcome& o : outcomes) {
    all.push_back(o.code == kOk ? o.report : json{{"error", o.error}, {"exit_code", o.code}});
  }
  out << all.dump(2) << "\n";
  return code;
}

// Evaluates `job` for every model, at most `jobs` at a time.
template <class F>
std::vector<Outcome> sweep(const std::vector<std::string>& paths, int jobs, F job) {
  std::vector<Outcome> outcomes(paths.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < paths.size(); start += width) {
    const std::size_t stop = std::min(paths.size(), start + width);
    std::vector<std::future<Outcome>> running;
    for (std::size_t i = start; i < stop; ++i) {
      running.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async,
                                   [&, i] { return guarded([&] { return job(paths[i]); }); }));
    }
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = running[i - start].get();
  }
  return outcomes;
}

Matrix covariance_from_file(const std::string& path, Index modes) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open initial covariance '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("initial covariance is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("entries")) {
    throw InputError("initial covariance needs 'entries'");
  }
  const Basis basis = parse_basis(j.value("basis", std::string("majorana")));
  const Matrix m = matrix_from_json(j["entries"], 2 * modes, 2 * modes, "initial covariance");
  return convert_basis(validate_covariance(m, basis), Basis::majorana).entries;
}

Matrix random_covariance(Index modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RealMatrix r(2 * modes, 2 * modes);
  for (Index i = 0; i < r.rows(); ++i) {
    r(i, i) = 0.0;
    for (Index j = i + 1; j < r.cols(); ++j) {
      r(i, j) = normal(rng);
      r(j, i) = -r(i, j);
    }
  }
  const HamiltonianMatrix t{kI * r.cast<Complex>(), Basis::majorana};
  return to_majorana(covariance_from_gibbs(t, 0.5).entries);
}

Matrix initial_covariance(const std::string& choice, const Model& m, std::uint64_t seed,
                          const Tolerances& tol) {
  const Index L = m.spec.system_modes();
  if (choice == "half") return 0.5 * Matrix::Identity(2 * L, 2 * L);
  if (choice == "vacuum") {
    Matrix ca = Matrix::Zero(2 * L, 2 * L);
    ca.topLeftCorner(L, L).setIdentity();
    return to_majorana(ca);
  }
  if (choice == "random") return random_covariance(L, seed);
  if (choice == "stationary") return stationary(m.spec, tol).entries;
  return covariance_from_file(choice, L);
}

int cmd_evolve(const std::string& path, const std::string& m0_choice, double t_final,
               int samples, std::uint64_t seed, const Tolerances& tol, std::ostream& out) {
  if (!(t_final > 0.0)) throw InputError("--t-final must be positive");
  if (samples < 1) throw InputError("--samples must be at least 1");
  const Model m = resolve(read_model_file(path), tol);
  const Index L = m.spec.system_modes();
  const Matrix m0 = initial_covariance(m0_choice, m, seed, tol);
  const ErgodicityReport rep = ergodicity(m.spec, tol);
  std::optional<Matrix> m_inf;
  if (rep.unique_stationary) m_inf = stationary(m.spec, tol).entries;

  out << "t";
  for (Index i = 0; i < L; ++i) out << ",occupation_" << i + 1;
  for (Index i = 0; i + 1 < L; ++i) out << ",current_" << i + 1;
  if (m_inf) out << ",distance";
  out << "\n";
  for (int k = 1; k <= samples; ++k) {
    const double t = t_final * k / samples;
    const Matrix mt = propagate(m.spec, {m0, Basis::majorana}, t, PropagationMethod::automatic,
                                tol).entries;
    const Matrix small = small_of(mt);
    out << format_double(t);
    const RealVector occ = occupations(small);
    const RealVector cur = currents(small);
    for (Index i = 0; i < occ.size(); ++i) out << "," << format_double(occ(i));
    for (Index i = 0; i < cur.size(); ++i) out << "," << format_double(cur(i));
    if (m_inf) out << "," << format_double(max_abs(mt - *m_inf));
    out << "\n";
  }
  return kOk;
}

int cmd_oracle_compare(const std::string& path, double t, const std::string& iso_choice,
                       const std::string& m0_choice, std::uint64_t seed, double threshold,
                       const Tolerances& tol, std::ostream& out) {
  if (!(t >= 0.0)) throw InputError("--t must be non-negative");
  const Model m = resolve(read_model_file(path), tol);
  const Index L = m.spec.system_modes();
  const Index K = m.spec.bath_modes();
  if (L > 3 || K > 2) {
    throw TooLarge("oracle-compare supports L <= 3 and K <= 2 (got L = " + std::to_string(L) +
                   ", K = " + std::to_string(K) + ")");
  }
  std::vector<IsomorphismTag> isos;
  if (iso_choice == "all") {
    isos = {IsomorphismTag::e_sb, IsomorphismTag::e_bs};
    if (m.left_bath_modes > 0) isos.push_back(IsomorphismTag::e_b1sb2);
  } else {
    isos = {parse_isomorphism(iso_choice)};
  }
  const Matrix m0 = initial_covariance(m0_choice, m, seed, tol);
  const DenseState rho0 = quasi_free_state({m0, Basis::majorana});
  const Matrix fast =
      propagate(m.spec, covariance_of(rho0), t, PropagationMethod::automatic, tol).entries;

  json r = metadata(m, tol);
  r["t"] = t;
  r["threshold"] = threshold;
  json per = json::object();
  double worst = 0.0;
  for (IsomorphismTag iso : isos) {
    const DenseLindbladian lind = build_lindbladian(m.spec, iso, m.left_bath_modes, tol);
    const Matrix dense = covariance_of(evolve_dense(lind, rho0, t)).entries;
    const double dev = max_abs(dense - fast);
    per[std::string(to_string(iso))] = dev;
    worst = std::max(worst, dev);
  }
  r["deviation"] = per;
  r["max_deviation"] = worst;
  r["pass"] = worst <= threshold;
  out << r.dump(2) << "\n";
  return worst <= threshold ? kOk : kNumericalError;
}

int cmd_model_build(const std::string& preset, const std::vector<std::string>& params,
                    bool expand, const std::string& output, const Tolerances& tol,
                    std::ostream& out) {
  ModelFile f;
  f.preset = preset;
  const json defaults = preset_defaults(preset);
  f.parameters = defaults;
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--param expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (!defaults.contains(key)) {
      throw InputError("preset '" + preset + "' has no parameter '" + key + "'");
    }
    try {
      f.parameters[key] = json::parse(value);
    } catch (const json::exception&) {
      throw InputError("parameter '" + key + "' is not a number: '" + value + "'");
    }
  }
  const Model m = resolve(f, tol);
  const ModelFile written = expand ? explicit_from(m) : f;
  const std::string text = to_json(written).dump(2) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output);
    if (!file) throw InputError("cannot write '" + output + "'");
    file << text;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-free fermionic Lindblad semigroups", "qfl"};
  app.require_subcommand(1);
  Tolerances tol;

  std::vector<std::string> models;
  int jobs = 1;
  auto* check = app.add_subcommand("check", "ergodicity report");
  check->add_option("models", models, "model files")->required();
  check->add_option("--jobs", jobs, "parallel model evaluations")->check(CLI::PositiveNumber);
  add_tolerance_flags(check, tol);

  bool full = false;
  auto* stat = app.add_subcommand("stationary", "stationary covariance");
  stat->add_option("models", models, "model files")->required();
  stat->add_option("--jobs", jobs, "parallel model evaluations")->check(CLI::PositiveNumber);
  stat->add_flag("--full", full, "include the full Majorana covariance");
  add_tolerance_flags(stat, tol);

  std::string model;
  std::string m0 = "half";
  double t_final = 1.0;
  int samples = 10;
  std::uint64_t seed = 0;
  auto* evolve = app.add_subcommand("evolve", "covariance time series (CSV)");
  evolve->add_option("model", model, "model file")->required();
  evolve->add_option("--m0", m0, "half | vacuum | random | stationary | covariance file");
  evolve->add_option("--t-final", t_final, "final time");
  evolve->add_option("--samples", samples, "number of sample times");
  evolve->add_option("--seed", seed, "seed for --m0 random");
  add_tolerance_flags(evolve, tol);

  double t = 1.0;
  std::string iso = "all";
  double threshold = 1e-7;
  std::string oracle_m0 = "random";
  auto* oracle = app.add_subcommand("oracle-compare", "dense oracle vs covariance flow");
  oracle->add_option("model", model, "model file")->required();
  oracle->add_option("--t", t, "evolution time");
  oracle->add_option("--iso", iso, "E_SB | E_BS | E_B1SB2 | all");
  oracle->add_option("--m0", oracle_m0, "half | vacuum | random | stationary | covariance file");
  oracle->add_option("--seed", seed, "seed for --m0 random");
  oracle->add_option("--threshold", threshold, "maximum accepted deviation");
  add_tolerance_flags(oracle, tol);

  std::string preset;
  std::vector<std::string> params;
  bool expand = false;
  std::string output;
  auto* model_cmd = app.add_subcommand("model", "model files");
  model_cmd->require_subcommand(1);
  auto* build = model_cmd->add_subcommand("build", "write a preset model file");
  build->add_option("preset", preset, "preset name")->required();
  build->add_option("--param", params, "key=value override");
  build->add_flag("--explicit", expand, "write the resolved matrices instead of the preset");
  build->add_option("-o,--output", output, "output path (default: standard output)");
  add_tolerance_flags(build, tol);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Outcome o = guarded([&]() -> json {
    if (*check) {
      return json{{"exit_code", emit(sweep(models, jobs,
                                           [&](const std::string& p) {
                                             return check_report(p, tol);
                                           }),
                                     out, err)}};
    }
    if (*stat) {
      return json{{"exit_code", emit(sweep(models, jobs,
                                           [&](const std::string& p) {
                                             return stationary_report(p, full, tol);
                                           }),
                                     out, err)}};
    }
    if (*evolve) return json{{"exit_code", cmd_evolve(model, m0, t_final, samples, seed, tol, out)}};
    if (*oracle) {
      return json{{"exit_code", cmd_oracle_compare(model, t, iso, oracle_m0, seed, threshold,
                                                   tol, out)}};
    }
    return json{{"exit_code", cmd_model_build(preset, params, expand, output, tol, out)}};
  });
  if (o.code != kOk) {
    err << "error: " << o.error << "\n";
    return o.code;
  }
  return o.report["exit_code"].get<int>();
}

}  // namespace qfl::cli
