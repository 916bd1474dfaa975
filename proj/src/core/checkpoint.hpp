#pragma once

#include <json.hpp>

#include <optional>
#include <string>

namespace bohr {

// Resumable search state persisted at shard boundaries. Resuming with an
// unchanged config hash reproduces the uninterrupted result byte for byte.
struct Checkpoint {
    std::string config_hash;
    std::string command;
    unsigned long elapsed_ms = 0;
    nlohmann::json state; // command-specific frontier + best-so-far

    static std::optional<Checkpoint> load(const std::string& path);
    void save(const std::string& path) const; // atomic (tmp + rename)
    static void remove(const std::string& path);
};

} // namespace bohr
