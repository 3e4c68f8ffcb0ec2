#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

namespace seabattle::service {

/// Append-only JSON-lines file. Every append is flushed to stable storage
/// before it returns, so an acknowledged event survives a crash.
class EventLog {
public:
    /// Opens (creating if needed) the log at `path` and loads its records.
    /// A torn final line, which can only be an unacknowledged write, is
    /// truncated away; corruption anywhere else throws.
    explicit EventLog(std::filesystem::path path);
    ~EventLog();

    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    void append(const nlohmann::json& record);

    [[nodiscard]] const std::vector<nlohmann::json>& records() const { return records_; }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    int fd_ = -1;
    std::vector<nlohmann::json> records_;
};

}  // namespace seabattle::service
