#pragma once

#include <psytest/executor.hpp>

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace psytest {

/// A completed session with the result computed when it finished.
struct SessionRecord {
    Session session;
    SessionResult result;

    friend bool operator==(const SessionRecord &, const SessionRecord &) = default;
};

/// One `.sessions.ndjson` line, newline included. Throws `SESSION_INCOMPLETE`
/// for sessions that have not finished.
std::string persist_session(const Session &session, const SessionResult &result);

enum class LoadMode { strict, lenient };

struct LoadIssue {
    std::size_t line = 0; ///< 1-based line number in the log
    std::string message;
};

struct LoadedLog {
    std::vector<SessionRecord> records;
    std::vector<LoadIssue> issues;
};

/// Parses a session log. Blank lines are skipped. A malformed line throws
/// `MALFORMED_INPUT` in strict mode; in lenient mode it is recorded in
/// `issues` and loading continues.
LoadedLog load_sessions(std::string_view text, LoadMode mode = LoadMode::strict);

/// Append-only session log file. Each record goes out in a single `write`
/// on an `O_APPEND` descriptor so concurrent writers never interleave lines.
class SessionLog {
public:
    explicit SessionLog(std::filesystem::path path);

    const std::filesystem::path &path() const noexcept { return path_; }

    void append(const Session &session, const SessionResult &result);
    /// An absent file reads as an empty log.
    LoadedLog read(LoadMode mode = LoadMode::strict) const;

private:
    std::filesystem::path path_;
    std::mutex mutex_;
};

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

} // namespace psytest
