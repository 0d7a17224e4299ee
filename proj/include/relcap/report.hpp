#pragma once

// Tabular reports with a fixed float format: 12 significant digits,
// '.' decimal separator, independent of the locale.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relcap/channel.hpp"
#include "relcap/inequality.hpp"

namespace relcap {

using Cell = std::variant<std::monostate, double, bool, std::uint64_t, std::string>;

std::string format_double(double value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// The 16-column capacity/inequality schema shared by simulate, verify and sweep.
const std::vector<std::string>& capacity_columns();

struct CapacityRow {
    std::string scenario_id;
    std::optional<double> beta, b, gamma, sigma, bandwidth;
    std::optional<double> c_a, c_b, gap, energy_per_bit_ratio;
    std::optional<bool> coverage_a, coverage_b;
    std::optional<double> lhs, bound, margin;
    std::string status;

    void fill(const CapacityReport& report);
    void fill(const InequalityWitness& witness);
    std::vector<Cell> cells() const;
};

Table capacity_table(const std::vector<CapacityRow>& rows);

struct Assertion {
    std::string name;
    bool passed = true;
    std::string detail;
};

std::string to_csv(const Table& table);

/// {"scenario_id", "task", "rows": [...], "assertions": [...]} with rows as
/// objects in column order. Numbers go through format_double first.
std::string to_json(const Table& table, const std::string& scenario_id, const std::string& task,
                    const std::vector<Assertion>& assertions);

}  // namespace relcap
