#include "bellpost/json_io.hpp"

#include <stdexcept>

namespace bellpost {

using nlohmann::ordered_json;

ordered_json behavior_to_json(const Behavior& b) {
    ordered_json j;
    j["scenario"]["parties"] = b.scenario.num_parties;
    j["scenario"]["settings"] = b.scenario.settings_per_party;
    j["scenario"]["outcomes"] = b.scenario.outcomes_per_party;
    ordered_json rows = ordered_json::array();
    const int no = b.scenario.num_joint_outcomes();
    for (int x = 0; x < b.scenario.num_joint_settings(); ++x) {
        ordered_json row = ordered_json::array();
        for (int a = 0; a < no; ++a) row.push_back(b.at(x, a));
        rows.push_back(std::move(row));
    }
    j["table"] = std::move(rows);
    return j;
}

Behavior behavior_from_json(const ordered_json& j) {
    BellScenario s;
    const auto& sc = j.at("scenario");
    s.num_parties = sc.at("parties").get<int>();
    s.settings_per_party = sc.at("settings").get<std::vector<int>>();
    s.outcomes_per_party = sc.at("outcomes").get<std::vector<std::vector<int>>>();
    s.check();

    Behavior b = Behavior::zeros(s);
    const auto& rows = j.at("table");
    if (static_cast<int>(rows.size()) != s.num_joint_settings())
        throw std::invalid_argument("behavior table has the wrong number of setting rows");
    const int no = s.num_joint_outcomes();
    for (int x = 0; x < s.num_joint_settings(); ++x) {
        const auto& row = rows[x];
        if (static_cast<int>(row.size()) != no)
            throw std::invalid_argument("behavior table row has the wrong length");
        for (int a = 0; a < no; ++a) b.at(x, a) = row[a].get<double>();
    }
    return b;
}

}  // namespace bellpost
