#include "relcap/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace relcap {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& capacity_columns() {
    static const std::vector<std::string> columns = {
        "scenario_id", "beta",       "b",          "gamma",    "sigma",      "W",          "C_A_bits_per_s",
        "C_B_bits_per_s", "gap",     "energy_per_bit_ratio", "coverage_A", "coverage_B", "lhs_nats",
        "bound_nats",  "margin_nats", "status"};
    return columns;
}

void CapacityRow::fill(const CapacityReport& r) {
    beta = r.beta;
    b = r.b;
    gamma = r.gamma;
    sigma = r.sigma;
    bandwidth = r.bandwidth;
    c_a = r.c_a;
    c_b = r.c_b;
    gap = r.gap;
    energy_per_bit_ratio = r.energy_per_bit_ratio;
    coverage_a = r.coverage_a;
    coverage_b = r.coverage_b;
    status = to_string(r.status);
}

void CapacityRow::fill(const InequalityWitness& w) {
    b = w.b;
    lhs = w.lhs;
    bound = w.bound;
    margin = w.margin;
}

namespace {

template <class T>
Cell cell(const std::optional<T>& v) {
    if (!v) return std::monostate{};
    return *v;
}

}  // namespace

std::vector<Cell> CapacityRow::cells() const {
    return {scenario_id, cell(beta), cell(b),          cell(gamma),    cell(sigma),   cell(bandwidth),
            cell(c_a),   cell(c_b),  cell(gap),        cell(energy_per_bit_ratio),    cell(coverage_a),
            cell(coverage_b), cell(lhs), cell(bound),  cell(margin),   status};
}

Table capacity_table(const std::vector<CapacityRow>& rows) {
    Table t{capacity_columns(), {}};
    for (const auto& r : rows) t.rows.push_back(r.cells());
    return t;
}

namespace {

std::string csv_text(const Cell& c) {
    struct {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const {
            if (v.find_first_of(",\"\n") == std::string::npos) return v;
            std::string out = "\"";
            for (char ch : v) {
                if (ch == '"') out += '"';
                out += ch;
            }
            return out + "\"";
        }
    } visitor;
    return std::visit(visitor, c);
}

nlohmann::ordered_json json_value(const Cell& c) {
    struct {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return format_double(v);
            const std::string text = format_double(v);
            double rounded = 0.0;
            std::from_chars(text.data(), text.data() + text.size(), rounded);
            return rounded;
        }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    } visitor;
    return std::visit(visitor, c);
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_text(row[i]);
        out += "\n";
    }
    return out;
}

std::string to_json(const Table& table, const std::string& scenario_id, const std::string& task,
                    const std::vector<Assertion>& assertions) {
    nlohmann::ordered_json j;
    j["scenario_id"] = scenario_id;
    j["task"] = task;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_value(row[i]);
        rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    auto checks = nlohmann::ordered_json::array();
    for (const auto& a : assertions) {
        checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    }
    j["assertions"] = std::move(checks);
    return j.dump(2) + "\n";
}

}  // namespace relcap
