#pragma once

// Command implementations behind the `finsler` executable. Each cmd_* function returns the process
// exit status; everything they print goes to the streams passed in, so tests drive them directly.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/app/config.hpp"
#include "finsler/curvature.hpp"

namespace finsler::app {

enum ExitStatus : int {
    kSuccess = 0,
    kVerdictFailure = 1,
    kUsageError = 2,
    kIoError = 3,
};

inline constexpr double kTable1Tolerance = 1e-9;
inline constexpr double kConnectionTableTolerance = 1e-10;

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// Parses "a,b,c" into doubles; throws ConfigError on malformed input.
std::vector<double> parse_coordinates(std::string_view csv);

// table1 ------------------------------------------------------------------------------------------

struct Table1Row {
    std::string case_id;
    std::string flag_pole;
    std::string transverse;
    double k_computed = 0;
    double k_closed_form = 0;
    double abs_err = 0;
};

/// Flag curvature of every special-flag family at random unit poles and transverse vectors drawn from
/// the family's spans, `samples` rows per family.
std::vector<Table1Row> compute_table1(const HeisenbergPreset& preset, std::uint64_t seed, int samples = 1);
bool table1_passes(const std::vector<Table1Row>& rows);
void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);
std::vector<Table1Row> read_table1_csv(std::istream& in);

int cmd_table1(const ModelConfig& config, const std::filesystem::path& out, std::uint64_t seed, int samples,
               std::ostream& err);

// connection-tables -------------------------------------------------------------------------------

struct ConnectionCell {
    std::string row;    ///< differentiating direction, e.g. "W"
    std::string column; ///< differentiated field
    Vector<double> computed;
    Vector<double> closed_form;
    double defect = 0; ///< max-norm of computed − closed_form
};

struct ConnectionBlock {
    std::string name;
    std::string basis_note;
    Vector<double> pole;
    std::vector<ConnectionCell> cells;
};

std::vector<ConnectionBlock> compute_connection_tables(const HeisenbergPreset& preset, std::uint64_t seed);
nlohmann::json connection_tables_json(const HeisenbergPreset& preset, std::uint64_t seed,
                                      const std::vector<ConnectionBlock>& blocks);
/// Recomputes every cell defect from the `computed`/`closed_form` arrays of an emitted document.
bool connection_tables_pass(const nlohmann::json& doc);

int cmd_connection_tables(const ModelConfig& config, const std::filesystem::path& out, std::uint64_t seed,
                          std::ostream& err);

// flag / search -----------------------------------------------------------------------------------

nlohmann::json to_json(const FlagReport<double>& report);
nlohmann::json to_json(const SignCertificate<double>& certificate);

int cmd_flag(const ModelConfig& config, const std::vector<double>& w, const std::vector<double>& x,
             std::ostream& out, std::ostream& err);

inline constexpr std::size_t kDefaultSearchBudget = 10000;

int cmd_search(const ModelConfig& config, std::uint64_t seed, std::size_t max_samples, std::ostream& out,
               std::ostream& err);

// verify ------------------------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double defect = 0;
    double tolerance = 0;
    bool passed() const { return defect <= tolerance; }
};

/// Oracle cross-checks on `samples` random reference vectors: closed-form osculating product and
/// Cartan tensor against finite differences, torsion and almost-metric residuals, and agreement of the
/// X₀ = 0 Chern–Rund table with the Levi-Civita table.
std::vector<CheckResult> run_verification(const RandersStructure<double>& s, std::uint64_t seed, int samples);

int cmd_verify(const ModelConfig& config, std::uint64_t seed, int samples, std::ostream& out, std::ostream& err);

} // namespace finsler::app
