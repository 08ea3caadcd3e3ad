#include "finsler/app/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "finsler/connection.hpp"
#include "finsler/randers.hpp"

namespace finsler::app {

namespace {

using nlohmann::json;
using Vec = Vector<double>;

json vector_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vec vector_from_json(const json& j)
{
    const auto coords = j.get<std::vector<double>>();
    return Eigen::Map<const Vec>(coords.data(), static_cast<Eigen::Index>(coords.size()));
}

// Maps the exceptions thrown by config parsing and the library onto exit statuses.
int guarded(std::ostream& err, const char* command, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const IoError& e) {
        err << command << ": " << e.what() << '\n';
        return kIoError;
    } catch (const ConfigError& e) {
        err << command << ": " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << command << ": " << e.what() << '\n';
        return kUsageError;
    } catch (const SearchFailure& e) {
        err << command << ": " << e.what() << '\n';
        return kVerdictFailure;
    }
}

const HeisenbergPreset& require_preset(const ModelConfig& config, const char* command)
{
    if (!config.is_preset())
        throw ConfigError(std::string(command) + " requires a heisenberg5 preset");
    return config.preset();
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw IoError("write failed for " + path.string());
}

Vec basis(Eigen::Index i) { return Vec::Unit(5, i); }

} // namespace

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::vector<double> parse_coordinates(std::string_view csv)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = std::min(csv.find(',', pos), csv.size());
        std::string_view field = csv.substr(pos, comma - pos);
        while (!field.empty() && field.front() == ' ')
            field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ')
            field.remove_suffix(1);
        if (!field.empty() && field.front() == '+')
            field.remove_prefix(1);
        double v = 0;
        const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || end != field.data() + field.size())
            throw ConfigError("malformed coordinate list '" + std::string(csv) + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

// table1 ------------------------------------------------------------------------------------------

std::vector<Table1Row> compute_table1(const HeisenbergPreset& preset, std::uint64_t seed, int samples)
{
    if (samples < 1)
        throw ConfigError("samples must be positive");
    const auto s = z_randers(preset.lambda, preset.mu, preset.xi);
    std::mt19937_64 rng(seed);
    std::vector<Table1Row> rows;
    for (const auto& c : kSpecialFlags) {
        const double closed = special_flag_closed_form(c.id, preset.lambda, preset.mu, preset.xi);
        for (int n = 0; n < samples; ++n) {
            const Vec pole = sample_unit_in_span<double>(c.pole, rng);
            Vec x = sample_unit_in_span<double>(c.transverse, rng);
            while (c.pole == c.transverse && std::abs(pole.dot(x)) > 0.99)
                x = sample_unit_in_span<double>(c.transverse, rng);
            const auto report = flag_curvature(s, pole, x);
            rows.push_back({std::string(c.label), std::string(to_string(c.pole)), std::string(to_string(c.transverse)),
                            report.k, closed, std::abs(report.k - closed)});
        }
    }
    return rows;
}

bool table1_passes(const std::vector<Table1Row>& rows)
{
    return std::all_of(rows.begin(), rows.end(),
                       [](const Table1Row& r) { return r.abs_err <= kTable1Tolerance; });
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows)
{
    out << "case,flag_pole,transverse,k_computed,k_closed_form,abs_err\n";
    for (const auto& r : rows)
        out << r.case_id << ',' << r.flag_pole << ',' << r.transverse << ',' << format_number(r.k_computed) << ','
            << format_number(r.k_closed_form) << ',' << format_number(r.abs_err) << '\n';
}

std::vector<Table1Row> read_table1_csv(std::istream& in)
{
    std::vector<Table1Row> rows;
    std::string line;
    if (!std::getline(in, line) || line != "case,flag_pole,transverse,k_computed,k_closed_form,abs_err")
        throw ConfigError("unexpected table1 header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 6)
            throw ConfigError("table1 row must have 6 fields: " + line);
        const auto number = [](const std::string& f) {
            if (f == "nan")
                return std::nan("");
            return parse_coordinates(f).front();
        };
        rows.push_back({fields[0], fields[1], fields[2], number(fields[3]), number(fields[4]), number(fields[5])});
    }
    return rows;
}

int cmd_table1(const ModelConfig& config, const std::filesystem::path& out, std::uint64_t seed, int samples,
               std::ostream& err)
{
    return guarded(err, "table1", [&] {
        const auto rows = compute_table1(require_preset(config, "table1"), seed, samples);
        auto file = open_output(out);
        write_table1_csv(file, rows);
        finish_output(file, out);
        if (!table1_passes(rows)) {
            err << "table1: closed-form mismatch above " << format_number(kTable1Tolerance) << '\n';
            return int(kVerdictFailure);
        }
        return int(kSuccess);
    });
}

// connection-tables -------------------------------------------------------------------------------

namespace {

struct CellSpec {
    std::string row;
    Vec row_vector;
    std::string column;
    Vec column_vector;
    Vec closed_form;
};

ConnectionBlock make_block(std::string name, std::string note, const Vec& pole, const RandersStructure<double>& s,
                           const std::vector<CellSpec>& specs)
{
    const auto table = chern_rund_table(osculating_gram(s, pole));
    ConnectionBlock block{std::move(name), std::move(note), pole, {}};
    for (const auto& spec : specs) {
        const Vec computed = table.covariant(spec.row_vector, spec.column_vector);
        block.cells.push_back({spec.row, spec.column, computed, spec.closed_form,
                               (computed - spec.closed_form).cwiseAbs().maxCoeff()});
    }
    return block;
}

// Cells over (W, W⊥, Z) for a pole in the plane carrying the bracket constant `c`.
std::vector<CellSpec> adapted_cells(const Vec& w, const Vec& wp, double c, double xi)
{
    const Vec z = basis(4);
    const double c2 = c * c;
    const Vec mixed = 0.25 * c2 * ((xi * xi - 2) * w - xi * z);
    return {
        {"W", w, "W", w, xi * wp},
        {"W", w, "Wperp", wp, -0.5 * c2 * (xi * w + z)},
        {"W", w, "Z", z, 0.5 * wp},
        {"Wperp", wp, "W", w, 0.5 * c2 * (z - xi * w)},
        {"Wperp", wp, "Wperp", wp, -0.25 * xi * c2 * wp},
        {"Wperp", wp, "Z", z, mixed},
        {"Z", z, "W", w, 0.5 * wp},
        {"Z", z, "Wperp", wp, mixed},
        {"Z", z, "Z", z, 0.25 * xi * wp},
    };
}

// Cells ∇_{e_a}, ∇_{e_b} applied to (W, W⊥), where (e_a, e_b) is the plane not containing W, with
// bracket constant `cross`; `own` is the bracket constant of the plane containing W.
std::vector<CellSpec> cross_cells(const Vec& w, const Vec& wp, Eigen::Index a, double cross, double own, double xi)
{
    const Vec ea = basis(a), eb = basis(a + 1);
    const std::string na = "e" + std::to_string(a + 1), nb = "e" + std::to_string(a + 2);
    return {
        {na, ea, "W", w, -0.5 * cross * xi * eb},
        {na, ea, "Wperp", wp, -0.25 * xi * own * own * ea},
        {nb, eb, "W", w, 0.5 * cross * xi * ea},
        {nb, eb, "Wperp", wp, -0.25 * xi * own * own * eb},
    };
}

} // namespace

std::vector<ConnectionBlock> compute_connection_tables(const HeisenbergPreset& preset, std::uint64_t seed)
{
    const double lambda = preset.lambda, mu = preset.mu, xi = preset.xi;
    const auto s = z_randers(lambda, mu, xi);
    const Vec z = basis(4);
    std::vector<ConnectionBlock> blocks;

    {
        const Vec e5 = z / (1 + xi);
        const std::array<Vec, 5> b{basis(0), basis(1), basis(2), basis(3), e5};
        std::array<std::array<Vec, 5>, 5> closed;
        for (auto& row : closed)
            row.fill(Vec::Zero(5));
        const double l = lambda / 2, m = mu / 2;
        closed[0][1] = l * z;
        closed[0][4] = -l * b[1];
        closed[1][0] = -l * z;
        closed[1][4] = l * b[0];
        closed[2][3] = m * z;
        closed[2][4] = -m * b[3];
        closed[3][2] = -m * z;
        closed[3][4] = m * b[2];
        closed[4][0] = -l * b[1];
        closed[4][1] = l * b[0];
        closed[4][2] = -m * b[3];
        closed[4][3] = m * b[2];
        std::vector<CellSpec> specs;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                specs.push_back({"e" + std::to_string(i + 1), b[i], "e" + std::to_string(j + 1), b[j], closed[i][j]});
        blocks.push_back(make_block("pole_center", "W = Z; e5 = Z/(1+xi)", z, s, specs));
    }

    std::mt19937_64 rng(seed);
    const auto algebra = heisenberg5(lambda, mu);
    const Vec w12 = sample_unit_in_span<double>(FlagSpan::e12, rng);
    const Vec w34 = sample_unit_in_span<double>(FlagSpan::e34, rng);
    const Vec wp12 = w_perp(algebra, w12);
    const Vec wp34 = w_perp(algebra, w34);

    blocks.push_back(make_block("pole_e12_adapted", "W in span(e1,e2)", w12, s, adapted_cells(w12, wp12, lambda, xi)));
    blocks.push_back(
        make_block("pole_e12_cross", "W in span(e1,e2)", w12, s, cross_cells(w12, wp12, 2, mu, lambda, xi)));
    blocks.push_back(make_block("pole_e34_adapted", "W in span(e3,e4)", w34, s, adapted_cells(w34, wp34, mu, xi)));
    blocks.push_back(
        make_block("pole_e34_cross", "W in span(e3,e4)", w34, s, cross_cells(w34, wp34, 0, lambda, mu, xi)));
    return blocks;
}

nlohmann::json connection_tables_json(const HeisenbergPreset& preset, std::uint64_t seed,
                                      const std::vector<ConnectionBlock>& blocks)
{
    json doc{{"lambda", preset.lambda}, {"mu", preset.mu}, {"xi", preset.xi}, {"seed", seed}};
    double max_defect = 0;
    json jblocks = json::array();
    for (const auto& b : blocks) {
        json cells = json::array();
        for (const auto& c : b.cells) {
            cells.push_back({{"row", c.row},
                             {"column", c.column},
                             {"computed", vector_json(c.computed)},
                             {"closed_form", vector_json(c.closed_form)},
                             {"defect", c.defect}});
            max_defect = std::max(max_defect, c.defect);
        }
        jblocks.push_back({{"name", b.name}, {"basis", b.basis_note}, {"pole", vector_json(b.pole)}, {"cells", cells}});
    }
    doc["blocks"] = jblocks;
    doc["max_defect"] = max_defect;
    doc["tolerance"] = kConnectionTableTolerance;
    doc["pass"] = max_defect <= kConnectionTableTolerance;
    return doc;
}

bool connection_tables_pass(const nlohmann::json& doc)
{
    for (const auto& b : doc.at("blocks"))
        for (const auto& c : b.at("cells")) {
            const Vec diff = vector_from_json(c.at("computed")) - vector_from_json(c.at("closed_form"));
            if (!(diff.cwiseAbs().maxCoeff() <= kConnectionTableTolerance))
                return false;
        }
    return true;
}

int cmd_connection_tables(const ModelConfig& config, const std::filesystem::path& out, std::uint64_t seed,
                          std::ostream& err)
{
    return guarded(err, "connection-tables", [&] {
        const auto& preset = require_preset(config, "connection-tables");
        const json doc = connection_tables_json(preset, seed, compute_connection_tables(preset, seed));
        auto file = open_output(out);
        file << doc.dump(2) << '\n';
        finish_output(file, out);
        if (!doc.at("pass").get<bool>()) {
            err << "connection-tables: max defect " << format_number(doc.at("max_defect").get<double>())
                << " exceeds " << format_number(kConnectionTableTolerance) << '\n';
            return int(kVerdictFailure);
        }
        return int(kSuccess);
    });
}

// flag / search -----------------------------------------------------------------------------------

nlohmann::json to_json(const FlagReport<double>& report)
{
    json j{{"w", vector_json(report.w)},
           {"x", vector_json(report.x)},
           {"denominator", report.denominator},
           {"degenerate", report.degenerate}};
    j["k"] = report.degenerate ? json(nullptr) : json(report.k);
    return j;
}

nlohmann::json to_json(const SignCertificate<double>& certificate)
{
    return {{"positive_witness", to_json(certificate.positive_witness)},
            {"negative_witness", to_json(certificate.negative_witness)},
            {"samples_tried", certificate.samples_tried}};
}

int cmd_flag(const ModelConfig& config, const std::vector<double>& w, const std::vector<double>& x, std::ostream& out,
             std::ostream& err)
{
    return guarded(err, "flag", [&] {
        const auto s = make_structure(config);
        const Vec wv = Eigen::Map<const Vec>(w.data(), static_cast<Eigen::Index>(w.size()));
        const Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
        const auto report = flag_curvature(s, wv, xv);
        out << to_json(report).dump() << '\n';
        if (report.degenerate) {
            err << "flag: degenerate flag (transverse vector parallel to the pole)\n";
            return int(kVerdictFailure);
        }
        return int(kSuccess);
    });
}

int cmd_search(const ModelConfig& config, std::uint64_t seed, std::size_t max_samples, std::ostream& out,
               std::ostream& err)
{
    return guarded(err, "search", [&] {
        const auto certificate = sign_search(make_structure(config), seed, max_samples);
        json doc = to_json(certificate);
        doc["seed"] = seed;
        out << doc.dump() << '\n';
        return int(kSuccess);
    });
}

// verify ------------------------------------------------------------------------------------------

std::vector<CheckResult> run_verification(const RandersStructure<double>& s, std::uint64_t seed, int samples)
{
    if (samples < 1)
        throw ConfigError("samples must be positive");
    const auto n = s.dim();
    const auto& a = s.algebra();
    std::mt19937_64 rng(seed);

    const auto lie = validate(a);
    std::vector<CheckResult> checks{
        {"lie_algebra_antisymmetry", lie.antisymmetry_defect, 1e-12},
        {"lie_algebra_jacobi", lie.jacobi_defect, 1e-12},
        {"osculating_product_vs_fd", 0, 1e-6},
        {"cartan_vs_fd", 0, 1e-4},
        {"torsion", 0, 1e-10},
        {"almost_metric", 0, 1e-10},
        {"riemannian_levi_civita", 0, 1e-12},
    };

    const auto riemannian = RandersStructure<double>::riemannian(a);
    const auto levi_civita = levi_civita_table(a);
    for (int i = 0; i < samples; ++i) {
        const Vec w = sample_unit_sphere<double>(n, rng);
        const Vec u = sample_unit_sphere<double>(n, rng);
        const Vec v = sample_unit_sphere<double>(n, rng);
        const Vec x = sample_unit_sphere<double>(n, rng);
        checks[2].defect = std::max(checks[2].defect,
                                    std::abs(osculating_product(s, w, u, v) - osculating_product_fd(s, w, u, v)));
        checks[3].defect = std::max(checks[3].defect, std::abs(cartan(s, w, u, v, x) - cartan_fd(s, w, u, v, x)));

        const auto table = chern_rund_table(osculating_gram(s, w));
        checks[4].defect = std::max(checks[4].defect, torsion_defect(table));
        checks[5].defect = std::max(checks[5].defect, almost_metric_defect(table));

        const auto flat = chern_rund_table(osculating_gram(riemannian, w));
        checks[6].defect =
            std::max(checks[6].defect, (flat.gamma() - levi_civita.gamma()).cwiseAbs().maxCoeff());
    }
    return checks;
}

int cmd_verify(const ModelConfig& config, std::uint64_t seed, int samples, std::ostream& out, std::ostream& err)
{
    return guarded(err, "verify", [&] {
        const auto checks = run_verification(make_structure(config), seed, samples);
        json rows = json::array();
        bool all = true;
        for (const auto& c : checks) {
            rows.push_back(
                {{"check", c.name}, {"defect", c.defect}, {"tolerance", c.tolerance}, {"pass", c.passed()}});
            if (!c.passed()) {
                all = false;
                err << "verify: check '" << c.name << "' failed: defect " << format_number(c.defect) << " > "
                    << format_number(c.tolerance) << '\n';
            }
        }
        out << json{{"checks", rows}, {"pass", all}, {"seed", seed}, {"samples", samples}}.dump(2) << '\n';
        return int(all ? kSuccess : kVerdictFailure);
    });
}

} // namespace finsler::app
