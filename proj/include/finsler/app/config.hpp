#pragma once

// Model description consumed by the command-line front end.
//
// A config file is one JSON document holding exactly one of
//
//   {"preset":   {"name": "heisenberg5", "lambda": 2, "mu": 1, "xi": 0.5}}
//   {"explicit": {"dim": 5, "brackets": [{"i": 1, "j": 2, "k": 5, "value": 2}, ...], "x0": [0, 0, 0, 0, 0.5]}}
//
// Indices i, j, k are 1-based. Each bracket entry sets the coefficient of e_k in [e_i, e_j]; unless
// (j, i, k) is listed too, the antisymmetric partner is filled in with the opposite value.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "finsler/randers.hpp"

namespace finsler::app {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HeisenbergPreset {
    double lambda = 1;
    double mu = 1;
    double xi = 0.5;
};

struct BracketEntry {
    int i = 0;
    int j = 0;
    int k = 0;
    double value = 0;
};

struct ExplicitModel {
    int dim = 0;
    std::vector<BracketEntry> brackets;
    std::vector<double> x0;
};

struct ModelConfig {
    std::variant<HeisenbergPreset, ExplicitModel> model;

    bool is_preset() const { return std::holds_alternative<HeisenbergPreset>(model); }
    const HeisenbergPreset& preset() const { return std::get<HeisenbergPreset>(model); }
};

/// Checks the preset domain λ ≥ μ > 0, 0 < ξ < 1.
HeisenbergPreset make_preset(double lambda, double mu, double xi);

ModelConfig parse_config(const nlohmann::json& doc);
ModelConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ModelConfig& config);

/// Builds and validates the Randers structure (Lie algebra axioms, ‖X₀‖ < 1).
RandersStructure<double> make_structure(const ModelConfig& config);

} // namespace finsler::app
