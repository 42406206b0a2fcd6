#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcond/errors.hpp"

namespace qcond {

/// Truth table of f: {0,1}^n -> {0,1}^m, stored as 2^n output values in
/// [2^m). Invariant: n >= m >= 0, table length exactly 2^n.
struct BooleanFunctionTable {
    int num_inputs = 0;        // n
    int num_outputs = 0;       // m
    std::vector<std::uint32_t> table;

    BooleanFunctionTable(int n, int m, std::vector<std::uint32_t> values)
        : num_inputs(n), num_outputs(m), table(std::move(values)) {
        if (n < 0 || m < 0 || n < m) {
            throw InvalidParameter("BooleanFunctionTable: need n >= m >= 0");
        }
        if (n > 30) throw InvalidParameter("BooleanFunctionTable: n too large");
        if (table.size() != (std::size_t{1} << n)) {
            throw InvalidParameter("BooleanFunctionTable: table length must be 2^n");
        }
        const std::uint32_t range = std::uint32_t{1} << m;
        for (std::uint32_t v : table) {
            if (v >= range) throw InvalidParameter("BooleanFunctionTable: value out of range");
        }
    }

    std::size_t domain_size() const { return table.size(); }
    std::uint32_t range_size() const { return std::uint32_t{1} << num_outputs; }

    static BooleanFunctionTable constant(int n, std::uint32_t value) {
        return BooleanFunctionTable(
            n, value == 0 ? (n > 0 ? 1 : 0) : 1,
            std::vector<std::uint32_t>(std::size_t{1} << n, value));
    }

    /// f(x) = bit 0 of x.
    static BooleanFunctionTable first_bit(int n) {
        std::vector<std::uint32_t> t(std::size_t{1} << n);
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::uint32_t>(x & 1u);
        return BooleanFunctionTable(n, 1, std::move(t));
    }

    /// f(x) = low m bits of x.
    static BooleanFunctionTable projection(int n, int m) {
        std::vector<std::uint32_t> t(std::size_t{1} << n);
        const std::uint32_t mask = (std::uint32_t{1} << m) - 1;
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::uint32_t>(x) & mask;
        return BooleanFunctionTable(n, m, std::move(t));
    }

    static BooleanFunctionTable parity(int n) {
        std::vector<std::uint32_t> t(std::size_t{1} << n);
        for (std::size_t x = 0; x < t.size(); ++x) {
            t[x] = static_cast<std::uint32_t>(__builtin_popcountll(x) & 1);
        }
        return BooleanFunctionTable(n, 1, std::move(t));
    }
};

inline nlohmann::json to_json(const BooleanFunctionTable &f) {
    return nlohmann::json{{"n", f.num_inputs}, {"m", f.num_outputs}, {"table", f.table}};
}

inline BooleanFunctionTable boolean_function_from_json(const nlohmann::json &j) {
    if (!j.contains("n") || !j.contains("m") || !j.contains("table")) {
        throw ConfigError("truth table json: need n, m, table");
    }
    try {
        return BooleanFunctionTable(j.at("n").get<int>(), j.at("m").get<int>(),
                                    j.at("table").get<std::vector<std::uint32_t>>());
    } catch (const InvalidParameter &e) {
        throw ConfigError(std::string("truth table json: ") + e.what());
    }
}

inline BooleanFunctionTable load_boolean_function(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open truth table file: " + path);
    nlohmann::json j;
    in >> j;
    return boolean_function_from_json(j);
}

}  // namespace qcond
