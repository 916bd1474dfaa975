#include "core/checkpoint.hpp"

#include "core/error.hpp"

#include <cstdio>
#include <fstream>

namespace bohr {

std::optional<Checkpoint> Checkpoint::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput, "unreadable checkpoint '" + path + "': " + e.what());
    }
    Checkpoint cp;
    cp.config_hash = j.value("config_hash", "");
    cp.command = j.value("command", "");
    cp.elapsed_ms = j.value("elapsed_ms", 0ul);
    cp.state = j.value("state", nlohmann::json::object());
    return cp;
}

void Checkpoint::save(const std::string& path) const {
    nlohmann::json j{
        {"config_hash", config_hash},
        {"command", command},
        {"elapsed_ms", elapsed_ms},
        {"state", state},
    };
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidInput, "cannot write checkpoint '" + tmp + "'");
        out << j.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(ErrorCode::InvalidInput, "cannot move checkpoint into place at '" + path + "'");
}

void Checkpoint::remove(const std::string& path) {
    std::remove(path.c_str());
}

} // namespace bohr
