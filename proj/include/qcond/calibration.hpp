#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcond/errors.hpp"
#include "qcond/estimators.hpp"

namespace qcond {

/// Calibrated constants for every procedure that the source analysis leaves
/// as an unnamed Theta(1). Defaults are the values produced by the
/// `calibrate` tool on the committed grids; loading calibration.json
/// overrides them.
struct Calibration {
    double additive_c = 2.0;
    double multiplicative_c = 2.0;
    double qcompare_cq = 180.0;
    double classical_cc = 3.0;
    // Uniformity tester structure: c_u/eps full-set draws, compare precision
    // eps/c_eta, c_p compared pairs.
    double uniformity_cu = 8.0;
    double uniformity_ceta = 5.0;
    double uniformity_cp = 6.0;

    std::vector<CalibrationPoint> additive_grid = default_additive_grid();
    std::vector<CalibrationPoint> multiplicative_grid = default_multiplicative_grid();

    static std::vector<CalibrationPoint> default_additive_grid() {
        return {{1, 4, 0.05, 0.10}, {1, 2, 0.10, 0.10}, {3, 4, 0.10, 0.05},
                {1, 10, 0.05, 0.25}, {9, 10, 0.05, 0.10}, {1, 3, 0.10, 0.20}};
    }

    static std::vector<CalibrationPoint> default_multiplicative_grid() {
        return {{1, 2, 0.30, 0.10}, {1, 4, 0.20, 0.10}, {3, 4, 0.15, 0.10},
                {2, 5, 0.25, 0.05}, {1, 10, 0.30, 0.20}, {3, 5, 0.20, 0.25}};
    }

    nlohmann::json to_json() const {
        auto grid_json = [](const std::vector<CalibrationPoint> &grid) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto &pt : grid) {
                arr.push_back({{"p_num", pt.p_num},
                               {"p_den", pt.p_den},
                               {"epsilon", pt.epsilon},
                               {"delta", pt.delta}});
            }
            return arr;
        };
        return nlohmann::json{
            {"additive_c", additive_c},
            {"multiplicative_c", multiplicative_c},
            {"qcompare_cq", qcompare_cq},
            {"classical_cc", classical_cc},
            {"uniformity", {{"c_u", uniformity_cu}, {"c_eta", uniformity_ceta}, {"c_p", uniformity_cp}}},
            {"grid",
             {{"additive", grid_json(additive_grid)}, {"multiplicative", grid_json(multiplicative_grid)}}}};
    }

    static Calibration from_json(const nlohmann::json &j) {
        Calibration cal;
        cal.additive_c = j.value("additive_c", cal.additive_c);
        cal.multiplicative_c = j.value("multiplicative_c", cal.multiplicative_c);
        cal.qcompare_cq = j.value("qcompare_cq", cal.qcompare_cq);
        cal.classical_cc = j.value("classical_cc", cal.classical_cc);
        if (j.contains("uniformity")) {
            const auto &u = j.at("uniformity");
            cal.uniformity_cu = u.value("c_u", cal.uniformity_cu);
            cal.uniformity_ceta = u.value("c_eta", cal.uniformity_ceta);
            cal.uniformity_cp = u.value("c_p", cal.uniformity_cp);
        }
        auto parse_grid = [](const nlohmann::json &arr) {
            std::vector<CalibrationPoint> grid;
            for (const auto &e : arr) {
                grid.push_back({e.at("p_num").get<std::uint32_t>(),
                                e.at("p_den").get<std::uint32_t>(),
                                e.at("epsilon").get<double>(), e.at("delta").get<double>()});
            }
            return grid;
        };
        if (j.contains("grid")) {
            if (j.at("grid").contains("additive")) {
                cal.additive_grid = parse_grid(j.at("grid").at("additive"));
            }
            if (j.at("grid").contains("multiplicative")) {
                cal.multiplicative_grid = parse_grid(j.at("grid").at("multiplicative"));
            }
        }
        return cal;
    }

    static Calibration load(const std::string &path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open calibration file: " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

    void save(const std::string &path) const {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write calibration file: " + path);
        out << to_json().dump(2) << "\n";
    }
};

}  // namespace qcond
