#include "seabattle/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace seabattle::service {

namespace {

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path) {
    throw std::runtime_error(what + " " + path.string() + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
    std::size_t done = 0;
    while (done < data.size()) {
        const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("write", path);
        }
        done += static_cast<std::size_t>(n);
    }
}

}  // namespace

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
    std::string content;
    if (std::filesystem::exists(path_)) {
        std::ifstream in(path_, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        content = ss.str();
    }

    std::size_t valid_bytes = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        const auto nl = content.find('\n', pos);
        if (nl == std::string::npos) break;  // torn tail: never acknowledged
        const auto line = std::string_view(content).substr(pos, nl - pos);
        if (!line.empty()) {
            try {
                records_.push_back(nlohmann::json::parse(line));
            } catch (const nlohmann::json::parse_error& e) {
                throw std::runtime_error("corrupt event log " + path_.string() + ": " + e.what());
            }
        }
        pos = nl + 1;
        valid_bytes = pos;
    }

    fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) fail("open", path_);
    if (valid_bytes < content.size()) {
        if (::ftruncate(fd_, static_cast<off_t>(valid_bytes)) != 0) fail("truncate", path_);
        if (::fsync(fd_) != 0) fail("fsync", path_);
    }
}

EventLog::~EventLog() {
    if (fd_ >= 0) ::close(fd_);
}

void EventLog::append(const nlohmann::json& record) {
    write_all(fd_, record.dump() + "\n", path_);
    if (::fsync(fd_) != 0) fail("fsync", path_);
    records_.push_back(record);
}

}  // namespace seabattle::service
