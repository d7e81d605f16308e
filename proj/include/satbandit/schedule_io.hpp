#pragma once
// JSON form of a schedule plus threshold:
//   {"K": 2, "T": 10, "S": 0.5,
//    "change_points": [1, 6, 11],
//    "segment_means": [[0.9, 0.1], [0.1, 0.9]]}
// change_points lists 1 = T_0 < ... < T_L = T + 1.

#include <fstream>
#include <string>

#include "json.hpp"
#include "satbandit/env.hpp"
#include "satbandit/errors.hpp"

namespace satbandit {

struct ScheduleDoc {
    MeanSchedule schedule;
    double threshold;
};

inline nlohmann::json schedule_to_json(const MeanSchedule& s, double threshold) {
    nlohmann::json j;
    j["K"] = s.num_arms();
    j["T"] = s.horizon();
    j["S"] = threshold;
    j["change_points"] = std::vector<Time>(s.change_points().begin(), s.change_points().end());
    j["segment_means"] = s.all_segment_means();
    return j;
}

inline ScheduleDoc schedule_from_json(const nlohmann::json& j) {
    try {
        const auto k = j.at("K").get<std::size_t>();
        const auto t = j.at("T").get<Time>();
        const auto s = j.at("S").get<double>();
        auto cps = j.at("change_points").get<std::vector<Time>>();
        auto means = j.at("segment_means").get<std::vector<std::vector<double>>>();
        return {MeanSchedule(k, t, std::move(cps), std::move(means)), s};
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("schedule document: ") + e.what());
    }
}

inline ScheduleDoc load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open schedule file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("schedule file " + path + ": " + e.what());
    }
    return schedule_from_json(j);
}

} // namespace satbandit
