#include "model_file.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace qfl::cli {

using Eigen::Index;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

Matrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols) {
    throw InputError(what + ": expected " + std::to_string(rows * cols) + " [re, im] pairs");
  }
  Matrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const json& z = j[k];
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      throw InputError(what + ": entry " + std::to_string(k) + " is not an [re, im] pair");
    }
    m(k / cols, k % cols) = Complex(z[0].get<double>(), z[1].get<double>());
  }
  return m;
}

json to_json(const ModelFile& f) {
  json j;
  j["schema_version"] = f.schema_version;
  if (f.preset) j["preset"] = {{"name", *f.preset}, {"parameters", f.parameters}};
  if (f.explicit_model) {
    const ExplicitModel& e = *f.explicit_model;
    j["explicit"] = {{"mode_count", e.mode_count},
                     {"bath_modes", e.bath_modes},
                     {"basis", std::string(to_string(e.basis))},
                     {"t_s", matrix_to_json(e.t_s)},
                     {"theta", matrix_to_json(e.theta)},
                     {"m_b", matrix_to_json(e.m_b)}};
  }
  return j;
}

namespace {

template <class T>
T get_or(const json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("parameter '") + key + "' has the wrong type");
  }
}

Index positive_length(const json& params, const char* key, Index fallback, Index minimum) {
  const auto v = get_or<long long>(params, key, fallback);
  if (v < minimum) {
    throw InputError(std::string("parameter '") + key + "' must be at least " +
                     std::to_string(minimum));
  }
  return static_cast<Index>(v);
}

void reject_unknown(const json& params, const json& defaults, const std::string& preset) {
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!defaults.contains(it.key())) {
      throw InputError("preset '" + preset + "' has no parameter '" + it.key() + "'");
    }
  }
}

Model from_gauge_invariant(std::string name, GaugeInvariantSpec gi, const Tolerances& tol) {
  SemigroupSpec spec = gi.lift(tol);
  return {std::move(name), std::move(spec), std::move(gi), std::nullopt, 0};
}

}  // namespace

ModelFile model_file_from_json(const json& j) {
  if (!j.is_object()) throw InputError("model file must be an object");
  ModelFile f;
  f.schema_version = j.value("schema_version", -1);
  if (f.schema_version != kSchemaVersion) {
    throw InputError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) +
                     ")");
  }
  const bool has_preset = j.contains("preset");
  const bool has_explicit = j.contains("explicit");
  if (has_preset == has_explicit) {
    throw InputError("model file needs exactly one of 'preset' and 'explicit'");
  }
  if (has_preset) {
    const json& p = j["preset"];
    if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) {
      throw InputError("preset needs a string 'name'");
    }
    f.preset = p["name"].get<std::string>();
    f.parameters = p.value("parameters", json::object());
    if (!f.parameters.is_object()) throw InputError("preset parameters must be an object");
    return f;
  }
  const json& e = j["explicit"];
  if (!e.is_object()) throw InputError("'explicit' must be an object");
  ExplicitModel m;
  try {
    m.mode_count = e.at("mode_count").get<Index>();
    m.bath_modes = e.at("bath_modes").get<Index>();
    m.basis = parse_basis(e.value("basis", std::string("majorana")));
  } catch (const json::exception& ex) {
    throw InputError(std::string("explicit model: ") + ex.what());
  } catch (const Error& ex) {
    throw InputError(ex.what());
  }
  if (m.mode_count < 1 || m.bath_modes < 0) throw InputError("explicit model: bad mode counts");
  const Index n = 2 * m.mode_count;
  const Index k = 2 * m.bath_modes;
  m.t_s = matrix_from_json(e.value("t_s", json()), n, n, "t_s");
  m.theta = matrix_from_json(e.value("theta", json()), n, k, "theta");
  m.m_b = matrix_from_json(e.value("m_b", json()), k, k, "m_b");
  f.explicit_model = std::move(m);
  return f;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw InputError("model file '" + path + "' is not valid JSON: " + ex.what());
  }
  return model_file_from_json(j);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "two_bath_chain", "one_end_chain",        "star", "simple_bath_chain",
      "thermalization_chain", "xy", "random"};
  return names;
}

json preset_defaults(const std::string& name) {
  if (name == "two_bath_chain") {
    return {{"length", 5}, {"theta1", 1.0}, {"thetaL", 1.0}, {"n1", 1.0}, {"nL", 0.0}};
  }
  if (name == "one_end_chain" || name == "star") {
    return {{"length", 3}, {"theta", 1.0}, {"m_b0", 0.5}};
  }
  if (name == "simple_bath_chain") return {{"length", 3}, {"theta", 1.0}, {"beta", 1.0}};
  if (name == "thermalization_chain") return {{"length", 4}, {"beta", 1.0}};
  if (name == "xy") {
    return {{"length", 4}, {"kappa", 0.5}, {"h", 0.0}, {"theta1", 1.0},
            {"theta2", 1.0}, {"m1", 1.0},  {"m2", 0.0}};
  }
  if (name == "random") return {{"system_modes", 2}, {"bath_modes", 1}, {"seed", 0}};
  throw InputError("unknown preset '" + name + "'");
}

Model resolve(const ModelFile& f, const Tolerances& tol) {
  try {
    if (f.explicit_model) {
      const ExplicitModel& e = *f.explicit_model;
      SemigroupSpec spec({e.t_s, e.basis}, {e.theta, e.basis}, {e.m_b, e.basis}, tol);
      return {"explicit", std::move(spec), std::nullopt, std::nullopt, 0};
    }
    const std::string& name = *f.preset;
    const json defaults = preset_defaults(name);
    reject_unknown(f.parameters, defaults, name);
    json p = defaults;
    p.update(f.parameters);

    if (name == "two_bath_chain") {
      ChainParams cp{positive_length(p, "length", 5, 2), get_or(p, "theta1", 1.0),
                     get_or(p, "thetaL", 1.0), get_or(p, "n1", 1.0), get_or(p, "nL", 0.0)};
      TwoBathChain chain = two_bath_chain(cp);
      Model m = from_gauge_invariant(name, chain.spec, tol);
      m.prediction = chain.prediction;
      return m;
    }
    if (name == "one_end_chain") {
      return from_gauge_invariant(
          name,
          one_end_chain(positive_length(p, "length", 3, 1), get_or(p, "theta", 1.0),
                        get_or(p, "m_b0", 0.5)),
          tol);
    }
    if (name == "star") {
      return from_gauge_invariant(
          name,
          star_model(positive_length(p, "length", 3, 2), get_or(p, "theta", 1.0),
                     get_or(p, "m_b0", 0.5)),
          tol);
    }
    if (name == "simple_bath_chain") {
      const Index L = positive_length(p, "length", 3, 1);
      const RealMatrix d = shift_matrix(L);
      Matrix th = Matrix::Zero(L, 1);
      th(0, 0) = get_or(p, "theta", 1.0);
      return from_gauge_invariant(
          name, simple_bath_model((d + d.transpose()).cast<Complex>(), th, get_or(p, "beta", 1.0)),
          tol);
    }
    if (name == "thermalization_chain") {
      const Index L = positive_length(p, "length", 4, 1);
      const RealMatrix d = shift_matrix(L);
      Matrix t = Matrix::Zero(2 * L, 2 * L);
      t.topLeftCorner(L, L) = (d + d.transpose()).cast<Complex>();
      t.bottomRightCorner(L, L) = -(d + d.transpose()).cast<Complex>();
      SemigroupSpec spec =
          thermalization_model({t, Basis::creation_annihilation}, get_or(p, "beta", 1.0));
      return {name, std::move(spec), std::nullopt, std::nullopt, 0};
    }
    if (name == "xy") {
      XYParams xp{positive_length(p, "length", 4, 2), get_or(p, "kappa", 0.5),
                  get_or(p, "h", 0.0),                get_or(p, "theta1", 1.0),
                  get_or(p, "theta2", 1.0),           get_or(p, "m1", 1.0),
                  get_or(p, "m2", 0.0)};
      XYModel xy = xy_chain(xp);
      return {name, std::move(xy.spec), std::nullopt, std::nullopt, xy.left_bath_modes};
    }
    if (name == "random") {
      SemigroupSpec spec = random_semigroup(positive_length(p, "system_modes", 2, 1),
                                            positive_length(p, "bath_modes", 1, 0),
                                            get_or<std::uint64_t>(p, "seed", 0));
      return {name, std::move(spec), std::nullopt, std::nullopt, 0};
    }
  } catch (const InputError&) {
    throw;
  } catch (const StructureViolation& e) {
    throw InputError(e.what());
  } catch (const DimensionMismatch& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown preset '" + *f.preset + "'");
}

ModelFile explicit_from(const Model& m) {
  ModelFile f;
  f.explicit_model = ExplicitModel{m.spec.system_modes(), m.spec.bath_modes(), Basis::majorana,
                                   m.spec.t_s(), m.spec.theta(), m.spec.m_b()};
  return f;
}

json to_json(const ErgodicityReport& r) {
  json j = {{"dimension", r.dimension},
            {"kalman_rank", r.kalman_rank},
            {"kalman_full", r.kalman_full},
            {"spectral_full", r.spectral_full},
            {"unique", r.unique_stationary},
            {"converges", r.converges},
            {"spectral_abscissa", r.spectral_abscissa}};
  j["offending_eigenvalue"] =
      r.offending_eigenvalue ? json(*r.offending_eigenvalue) : json(nullptr);
  return j;
}

json to_json(const Tolerances& t) {
  return {{"structural", t.structural},   {"numeric", t.numeric},
          {"singular_pivot", t.singular_pivot}, {"rank_factor", t.rank_factor},
          {"cluster_gap", t.cluster_gap}, {"pin", t.pin}};
}

std::string spec_hash(const SemigroupSpec& spec) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const Matrix& m) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(Complex);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  feed(spec.t_s());
  feed(spec.theta());
  feed(spec.m_b());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qfl::cli
