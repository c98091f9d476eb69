#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "noma/model.hpp"

namespace noma {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"K", "N_F", "p_max_watts", "weights": [K], "gains": [N_F][K], "noise_watts"?}
nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& doc);

// {"objective_bps_hz", "assignment": [[m, n] or null per subcarrier], "power": [N_F][K]}
nlohmann::json allocation_to_json(const Allocation& alloc);

// Parse failures are InvalidInput, unreadable files IoError.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace noma
