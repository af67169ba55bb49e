#pragma once

#include "lvem/lvem.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace lvem::cli {

class ConfigError : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

struct RunConfig {
  KappaSet kappas;
  Vec3 direction = Vec3::UnitZ();
  int cutoff = 2;
  std::vector<double> scales{1e-2, 1e-3};
  double time = 10.0;
  int grid_points = 50;
  std::uint64_t seed = 20240611;
  std::string output;
  bool from_tensor = false;              // coefficients were given as raw tensor components
  std::vector<std::string> notes;        // adjustments made while loading
};

struct LoadOptions {
  bool strict_symmetry = false;
};

namespace detail {

inline Mat3 read_matrix(const nlohmann::json& j, const std::string& key) {
  const nlohmann::json& m = j.at(key);
  if (!m.is_array() || m.size() != 3) throw ConfigError(key + " must be a 3x3 array");
  Mat3 out;
  for (int r = 0; r < 3; ++r) {
    const nlohmann::json& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 3) throw ConfigError(key + " must be a 3x3 array");
    for (int c = 0; c < 3; ++c) {
      const nlohmann::json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ConfigError(key + " entries must be numbers");
      out(r, c) = v.get<double>();
    }
  }
  return out;
}

// Each entry [a, b, c, d, value] sets one independent upper-index component
// together with its images under the pair symmetries.
inline KFTensor read_tensor(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("kf must be a list of [a, b, c, d, value] entries");
  KFTensor kf;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 5) throw ConfigError("kf entries must have five elements");
    std::array<int, 4> idx{};
    for (std::size_t n = 0; n < 4; ++n) {
      if (!e[n].is_number_integer()) throw ConfigError("kf indices must be integers");
      idx[n] = e[n].get<int>();
      if (idx[n] < 0 || idx[n] > 3) throw ConfigError("kf indices must lie in 0..3");
    }
    if (!e[4].is_number()) throw ConfigError("kf values must be numbers");
    if (idx[0] == idx[1] || idx[2] == idx[3]) throw ConfigError("kf entry sits on an antisymmetric diagonal");
    kf.set_riemann(idx[0], idx[1], idx[2], idx[3], e[4].get<double>());
  }
  return kf;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j, const LoadOptions& opt = {}) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  try {
    if (j.contains("kf")) {
      if (j.contains("kappa_e_minus") || j.contains("kappa_o_plus") || j.contains("kappa_tr"))
        throw ConfigError("give either kf or the kappa matrices, not both");
      const KFTensor kf = detail::read_tensor(j.at("kf"));
      const SymmetryReport rep = check_invariants(kf);
      // a tensor has no unique nearest valid projection we would want to guess at
      if (!rep.ok()) throw ConfigError("kf violates the tensor symmetries (worst residual " +
                                       std::to_string(rep.max()) + ")");
      cfg.kappas = kappas_from_kf(kf);
      cfg.from_tensor = true;
    } else {
      KappaSet k;
      k.e_minus = detail::read_matrix(j, "kappa_e_minus");
      k.o_plus = detail::read_matrix(j, "kappa_o_plus");
      if (!j.at("kappa_tr").is_number()) throw ConfigError("kappa_tr must be a number");
      k.tr = j.at("kappa_tr").get<double>();
      if (j.contains("kappa_e_plus")) k.e_plus = detail::read_matrix(j, "kappa_e_plus");
      if (j.contains("kappa_o_minus")) k.o_minus = detail::read_matrix(j, "kappa_o_minus");
      if (!k.e_plus.allFinite() || !k.e_minus.allFinite() || !k.o_plus.allFinite() ||
          !k.o_minus.allFinite() || !std::isfinite(k.tr))
        throw ConfigError("kappa entries must be finite");
      const double violation = k.structure_violation();
      if (violation > kDefaultTolerance) {
        if (opt.strict_symmetry)
          throw ConfigError("kappa matrices violate symmetry/trace conditions by " + std::to_string(violation));
        k = k.symmetrized();
        cfg.notes.push_back("kappa matrices symmetrized (violation " + std::to_string(violation) + ")");
      }
      cfg.kappas = k;
    }

    if (j.contains("direction")) {
      const auto& d = j.at("direction");
      if (!d.is_array() || d.size() != 3) throw ConfigError("direction must have three components");
      Vec3 v(d[0].get<double>(), d[1].get<double>(), d[2].get<double>());
      if (!(v.norm() > 1e-12) || !v.allFinite()) throw ConfigError("direction must be a nonzero vector");
      cfg.direction = v.normalized();
    }
    if (j.contains("cutoff")) cfg.cutoff = j.at("cutoff").get<int>();
    if (cfg.cutoff < 1 || cfg.cutoff > 4) throw ConfigError("cutoff must lie in 1..4");
    if (j.contains("scales")) cfg.scales = j.at("scales").get<std::vector<double>>();
    for (double s : cfg.scales)
      if (!(s > 0.0 && s <= 0.1)) throw ConfigError("scales must lie in (0, 0.1]");
    if (j.contains("time")) cfg.time = j.at("time").get<double>();
    if (!(std::abs(cfg.time) <= 10.0)) throw ConfigError("time must satisfy |t| <= 10");
    if (j.contains("grid_points")) cfg.grid_points = j.at("grid_points").get<int>();
    if (cfg.grid_points < 0 || cfg.grid_points > 100000) throw ConfigError("grid_points out of range");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

/// Reads a JSON configuration object.  A JSON-lines report written by
/// `decompose` is accepted too: its "kappas" record carries the same keys.
inline RunConfig load_config(const std::filesystem::path& path, const LoadOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
      const nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
      if (rec.is_object() && rec.value("record", "") == "kappas") {
        j = rec;
        break;
      }
    }
    if (j.is_discarded()) throw ConfigError("malformed configuration " + path.string());
  }
  return parse_config(j, opt);
}

}  // namespace lvem::cli
