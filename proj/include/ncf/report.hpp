#pragma once

// Command output as a self-describing record: scalar inputs and outputs with
// units, an optional table with per-column units, and warnings. Rendered as
// CSV (scalars and warnings as '#' comment lines above the table) or as JSON.
// Numbers are written with 9 significant digits in both encodings, and the
// JSON values are the doubles read back from that text, so both encodings
// parse to identical values.

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ncf::report {

using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Quantity
{
    std::string name;
    Cell value;
    std::string unit;  // "1" for dimensionless numbers, "" for text
};

struct Column
{
    std::string name;
    std::string unit;
};

struct OutputRecord
{
    std::string command;
    std::vector<Quantity> inputs;
    std::vector<Quantity> outputs;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> warnings;
};

inline std::string format_number(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

/// The double that the 9-significant-digit text of v parses back to.
inline double canonical(double v)
{
    return std::strtod(format_number(v).c_str(), nullptr);
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_text(const Cell& c)
{
    struct Visitor
    {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

inline nlohmann::json to_json_value(const Cell& c)
{
    struct Visitor
    {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(double v) const { return canonical(v); }
        nlohmann::json operator()(const std::string& s) const { return s; }
        nlohmann::json operator()(bool b) const { return b; }
    };
    return std::visit(Visitor{}, c);
}

inline void write_csv(std::ostream& os, const OutputRecord& rec)
{
    os << "# command: " << rec.command << '\n';
    auto scalar = [&](const char* kind, const Quantity& q) {
        os << "# " << kind << ": " << q.name << " = " << to_text(q.value);
        if (!q.unit.empty()) os << ' ' << q.unit;
        os << '\n';
    };
    for (const auto& q : rec.inputs) scalar("input", q);
    for (const auto& q : rec.outputs) scalar("output", q);
    for (const auto& w : rec.warnings) os << "# warning: " << w << '\n';
    if (rec.columns.empty()) return;

    for (std::size_t i = 0; i < rec.columns.size(); ++i)
    {
        const auto& c = rec.columns[i];
        if (i) os << ',';
        os << csv_escape(c.unit.empty() ? c.name : c.name + "[" + c.unit + "]");
    }
    os << '\n';
    for (const auto& row : rec.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i) os << ',';
            os << csv_escape(to_text(row[i]));
        }
        os << '\n';
    }
}

inline nlohmann::json to_json(const OutputRecord& rec)
{
    auto quantities = [](const std::vector<Quantity>& qs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& q : qs)
            arr.push_back({{"name", q.name}, {"value", to_json_value(q.value)}, {"unit", q.unit}});
        return arr;
    };
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : rec.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rec.rows)
    {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < rec.columns.size(); ++i)
            obj[rec.columns[i].name] = to_json_value(row[i]);
        rows.push_back(std::move(obj));
    }
    return {{"command", rec.command},  {"inputs", quantities(rec.inputs)},
            {"outputs", quantities(rec.outputs)}, {"columns", cols},
            {"rows", rows},            {"warnings", rec.warnings}};
}

inline void write_json(std::ostream& os, const OutputRecord& rec)
{
    os << to_json(rec).dump(2) << '\n';
}

} // namespace ncf::report
