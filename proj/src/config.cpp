#include "finsler/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <tuple>

#include "finsler/lie_algebra.hpp"

namespace finsler::app {

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* key)
{
    if (!obj.contains(key) || !obj.at(key).is_number())
        throw ConfigError(std::string("missing or non-numeric field '") + key + "'");
    return obj.at(key).get<double>();
}

int require_index(const json& obj, const char* key, int dim)
{
    if (!obj.contains(key) || !obj.at(key).is_number_integer())
        throw ConfigError(std::string("missing or non-integer field '") + key + "'");
    const int v = obj.at(key).get<int>();
    if (v < 1 || v > dim)
        throw ConfigError(std::string("index '") + key + "' out of range 1.." + std::to_string(dim));
    return v;
}

} // namespace

HeisenbergPreset make_preset(double lambda, double mu, double xi)
{
    if (!std::isfinite(lambda) || !std::isfinite(mu) || !(mu > 0) || !(lambda >= mu))
        throw ConfigError("heisenberg5 preset requires lambda >= mu > 0");
    if (!(xi > 0) || !(xi < 1))
        throw ConfigError("xi must be in (0,1) for the Z-Randers preset; use an explicit model with x0 = 0 for "
                          "Riemannian runs");
    return {lambda, mu, xi};
}

ModelConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    const bool has_preset = doc.contains("preset");
    const bool has_explicit = doc.contains("explicit");
    if (has_preset == has_explicit)
        throw ConfigError("config must contain exactly one of 'preset' or 'explicit'");

    if (has_preset) {
        const json& p = doc.at("preset");
        if (!p.is_object())
            throw ConfigError("'preset' must be an object");
        if (!p.contains("name") || p.at("name") != "heisenberg5")
            throw ConfigError("unknown preset name (expected \"heisenberg5\")");
        return {make_preset(require_number(p, "lambda"), require_number(p, "mu"), require_number(p, "xi"))};
    }

    const json& e = doc.at("explicit");
    if (!e.is_object())
        throw ConfigError("'explicit' must be an object");
    if (!e.contains("dim") || !e.at("dim").is_number_integer() || e.at("dim").get<int>() < 1)
        throw ConfigError("'dim' must be a positive integer");
    ExplicitModel model;
    model.dim = e.at("dim").get<int>();

    if (e.contains("brackets")) {
        if (!e.at("brackets").is_array())
            throw ConfigError("'brackets' must be an array");
        for (const json& b : e.at("brackets")) {
            if (!b.is_object())
                throw ConfigError("bracket entries must be objects");
            model.brackets.push_back({require_index(b, "i", model.dim), require_index(b, "j", model.dim),
                                      require_index(b, "k", model.dim), require_number(b, "value")});
        }
    }

    if (!e.contains("x0") || !e.at("x0").is_array())
        throw ConfigError("'x0' must be an array of numbers");
    for (const json& c : e.at("x0")) {
        if (!c.is_number())
            throw ConfigError("'x0' must be an array of numbers");
        model.x0.push_back(c.get<double>());
    }
    if (static_cast<int>(model.x0.size()) != model.dim)
        throw ConfigError("'x0' must have 'dim' entries");
    return {std::move(model)};
}

ModelConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError("config is not valid JSON: " + std::string(err.what()));
    }
    return parse_config(doc);
}

nlohmann::json to_json(const ModelConfig& config)
{
    if (config.is_preset()) {
        const auto& p = config.preset();
        return {{"preset", {{"name", "heisenberg5"}, {"lambda", p.lambda}, {"mu", p.mu}, {"xi", p.xi}}}};
    }
    const auto& e = std::get<ExplicitModel>(config.model);
    json brackets = json::array();
    for (const auto& b : e.brackets)
        brackets.push_back({{"i", b.i}, {"j", b.j}, {"k", b.k}, {"value", b.value}});
    return {{"explicit", {{"dim", e.dim}, {"brackets", brackets}, {"x0", e.x0}}}};
}

RandersStructure<double> make_structure(const ModelConfig& config)
{
    if (config.is_preset()) {
        const auto& p = config.preset();
        return z_randers(p.lambda, p.mu, p.xi);
    }

    const auto& e = std::get<ExplicitModel>(config.model);
    const Eigen::Index n = e.dim;
    Matrix<double> table = Matrix<double>::Zero(n, n * n);
    std::set<std::tuple<int, int, int>> listed;
    for (const auto& b : e.brackets)
        listed.emplace(b.i, b.j, b.k);
    for (const auto& b : e.brackets) {
        table(b.k - 1, pair_index(n, b.i - 1, b.j - 1)) = b.value;
        if (!listed.contains({b.j, b.i, b.k}))
            table(b.k - 1, pair_index(n, b.j - 1, b.i - 1)) = -b.value;
    }
    MetricLieAlgebra<double> algebra(std::move(table));
    const auto report = validate(algebra);
    if (!report.antisymmetric())
        throw ConfigError("structure constants are not antisymmetric (defect " +
                          std::to_string(report.antisymmetry_defect) + ")");
    if (!report.jacobi())
        throw ConfigError("structure constants violate the Jacobi identity (defect " +
                          std::to_string(report.jacobi_defect) + ")");

    Vector<double> x0 = Eigen::Map<const Vector<double>>(e.x0.data(), n);
    if (!(x0.norm() < 1))
        throw ConfigError("x0 must have Euclidean norm < 1 (got " + std::to_string(x0.norm()) + ")");
    return RandersStructure<double>(std::move(algebra), std::move(x0));
}

} // namespace finsler::app
