#include "noma/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace noma {

using nlohmann::json;

json instance_to_json(const ProblemInstance& inst) {
    json doc;
    doc["K"] = inst.num_users;
    doc["N_F"] = inst.num_subcarriers;
    doc["p_max_watts"] = inst.p_max;
    doc["weights"] = inst.weights;
    json gains = json::array();
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        json row = json::array();
        for (int m = 0; m < inst.num_users; ++m) row.push_back(inst.gain(i, m));
        gains.push_back(std::move(row));
    }
    doc["gains"] = std::move(gains);
    if (inst.noise_watts) doc["noise_watts"] = *inst.noise_watts;
    return doc;
}

ProblemInstance instance_from_json(const json& doc) {
    try {
        if (!doc.is_object()) throw InvalidInput("instance: document must be an object");
        for (const auto& [key, value] : doc.items()) {
            (void)value;
            if (key != "K" && key != "N_F" && key != "p_max_watts" && key != "weights" && key != "gains" &&
                key != "noise_watts")
                throw InvalidInput("instance: unknown field '" + key + "'");
        }
        ProblemInstance inst;
        inst.num_users = doc.at("K").get<int>();
        inst.num_subcarriers = doc.at("N_F").get<int>();
        inst.p_max = doc.at("p_max_watts").get<double>();
        inst.weights = doc.at("weights").get<std::vector<double>>();
        const json& gains = doc.at("gains");
        if (!gains.is_array() || static_cast<int>(gains.size()) != inst.num_subcarriers)
            throw InvalidInput("instance: gains must have N_F rows");
        for (const json& row : gains) {
            auto r = row.get<std::vector<double>>();
            if (static_cast<int>(r.size()) != inst.num_users) throw InvalidInput("instance: gain rows must have K entries");
            inst.gains.insert(inst.gains.end(), r.begin(), r.end());
        }
        if (doc.contains("noise_watts")) inst.noise_watts = doc.at("noise_watts").get<double>();
        inst.validate();
        return inst;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("instance: ") + e.what());
    }
}

json allocation_to_json(const Allocation& alloc) {
    json doc;
    doc["objective_bps_hz"] = alloc.objective;
    json assignment = json::array();
    json power = json::array();
    for (int i = 0; i < alloc.assignment.num_subcarriers; ++i) {
        if (auto p = alloc.assignment.pair_on(i))
            assignment.push_back({p->first, p->second});
        else
            assignment.push_back(nullptr);
        json row = json::array();
        for (int m = 0; m < alloc.power.num_users; ++m) row.push_back(alloc.power.at(i, m));
        power.push_back(std::move(row));
    }
    doc["assignment"] = std::move(assignment);
    doc["power"] = std::move(power);
    return doc;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace noma
