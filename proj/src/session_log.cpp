#include <psytest/session_log.hpp>
#include <psytest/error.hpp>

#include "detail/json_fields.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace psytest {

using detail::json;

namespace {

json demographics_to_json(const Demographics &demographics)
{
    json out = json::object();
    for (const auto &[name, value] : demographics)
        std::visit([&, &name = name](const auto &v) { out[name] = v; }, value);
    return out;
}

Demographics demographics_from_json(const json &obj)
{
    if (!obj.is_object())
        detail::malformed("'demographics' must be an object");
    Demographics out;
    for (const auto &[name, value] : obj.items()) {
        if (value.is_string())
            out.emplace(name, value.get<std::string>());
        else if (value.is_number_integer())
            out.emplace(name, value.get<std::int64_t>());
        else
            detail::malformed(fmt::format("demographic '{}' must be a string or an integer", name));
    }
    return out;
}

SessionRecord record_from_json(const json &root)
{
    using namespace detail;
    SessionRecord rec;
    Session &s = rec.session;
    s.session_id = SessionId{get_string(root, "session_id")};
    s.test_id = get_string(root, "test_id");
    s.demographics = demographics_from_json(field(root, "demographics"));
    for (const auto &a : get_array(root, "answers")) {
        const auto index = get_int(a, "answer_index");
        if (index < 0)
            malformed("'answer_index' must not be negative");
        s.answers.push_back(
            {ItemId{get_string(a, "item_id")}, static_cast<std::size_t>(index), parse_timestamp(get_string(a, "ts"))});
    }
    s.state = SessionState::completed;
    s.started_at = parse_timestamp(get_string(root, "started_at"));
    s.completed_at = parse_timestamp(get_string(root, "completed_at"));

    rec.result.session_id = s.session_id;
    for (const auto &r : get_array(root, "results"))
        rec.result.categories.push_back({CategoryId{get_string(r, "category_id")}, get_decimal(r, "raw_score"),
                                         static_cast<int>(get_int(r, "band_index")),
                                         get_string(r, "interpretation")});
    return rec;
}

} // namespace

std::string persist_session(const Session &session, const SessionResult &result)
{
    if (session.state != SessionState::completed || !session.completed_at)
        throw Error(ErrorCode::session_incomplete, "only completed sessions are persisted");
    if (result.session_id != session.session_id)
        throw Error(ErrorCode::test_mismatch, "result belongs to a different session");

    json root;
    root["session_id"] = session.session_id.value;
    root["test_id"] = session.test_id;
    root["demographics"] = demographics_to_json(session.demographics);
    json answers = json::array();
    for (const auto &a : session.answers)
        answers.push_back({{"item_id", a.item_id.value}, {"answer_index", a.answer_index}, {"ts", format_timestamp(a.ts)}});
    root["answers"] = std::move(answers);
    json results = json::array();
    for (const auto &r : result.categories)
        results.push_back({{"category_id", r.category_id.value},
                           {"raw_score", r.raw_score.to_string()},
                           {"band_index", r.band_index},
                           {"interpretation", r.interpretation}});
    root["results"] = std::move(results);
    root["started_at"] = format_timestamp(session.started_at);
    root["completed_at"] = format_timestamp(*session.completed_at);
    return root.dump() + "\n";
}

LoadedLog load_sessions(std::string_view text, LoadMode mode)
{
    LoadedLog out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos)
            continue;
        try {
            json root;
            try {
                root = json::parse(line.begin(), line.end());
            } catch (const json::exception &e) {
                detail::malformed(e.what());
            }
            out.records.push_back(record_from_json(root));
        } catch (const Error &e) {
            if (mode == LoadMode::strict)
                throw Error(ErrorCode::malformed_input, fmt::format("session log line {}: {}", line_no, e.what()));
            out.issues.push_back({line_no, e.what()});
        }
    }
    return out;
}

SessionLog::SessionLog(std::filesystem::path path) : path_(std::move(path)) {}

void SessionLog::append(const Session &session, const SessionResult &result)
{
    const std::string line = persist_session(session, result);
    std::lock_guard lock(mutex_);
    const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0)
        throw Error(ErrorCode::io_error, fmt::format("cannot open {}: {}", path_.string(), std::strerror(errno)));
    const ssize_t written = ::write(fd, line.data(), line.size());
    const int saved = errno;
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size()))
        throw Error(ErrorCode::io_error, fmt::format("short write to {}: {}", path_.string(), std::strerror(saved)));
}

LoadedLog SessionLog::read(LoadMode mode) const
{
    if (!std::filesystem::exists(path_))
        return {};
    return load_sessions(read_file(path_), mode);
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io_error, fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file(const std::filesystem::path &path, std::string_view contents)
{
    // Write beside the target and rename so a crash never leaves half a file.
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::io_error, fmt::format("cannot write {}", tmp.string()));
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw Error(ErrorCode::io_error, fmt::format("cannot write {}", tmp.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::io_error, fmt::format("cannot replace {}: {}", path.string(), ec.message()));
}

} // namespace psytest
