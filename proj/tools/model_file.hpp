#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qfl/models.hpp"
#include "qfl/oracle.hpp"

namespace qfl::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct ExplicitModel {
  Eigen::Index mode_count = 0;
  Eigen::Index bath_modes = 0;
  Basis basis = Basis::majorana;
  Matrix t_s, theta, m_b;
};

struct ModelFile {
  int schema_version = kSchemaVersion;
  std::optional<std::string> preset;
  json parameters = json::object();
  std::optional<ExplicitModel> explicit_model;
};

// A model resolved to matrices, with the gauge-invariant form when known.
struct Model {
  std::string name;
  SemigroupSpec spec;
  std::optional<GaugeInvariantSpec> gauge_invariant;
  std::optional<ChainStationaryPrediction> prediction;
  int left_bath_modes = 0;
};

// Thrown for malformed or schema-invalid input (exit code 1).
class InputError : public Error {
 public:
  using Error::Error;
};

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                        const std::string& what);

json to_json(const ModelFile& f);
ModelFile model_file_from_json(const json& j);
ModelFile read_model_file(const std::string& path);

// Default parameters of every preset, used by `model build`.
json preset_defaults(const std::string& name);
const std::vector<std::string>& preset_names();

Model resolve(const ModelFile& f, const Tolerances& tol);
ModelFile explicit_from(const Model& m);

json to_json(const ErgodicityReport& r);
json to_json(const Tolerances& t);
// FNV-1a over the Majorana entries of (T_S, Theta, M_B).
std::string spec_hash(const SemigroupSpec& spec);

// %.17g
std::string format_double(double x);

}  // namespace qfl::cli
