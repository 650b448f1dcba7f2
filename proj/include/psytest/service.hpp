#pragma once

#include <psytest/error.hpp>
#include <psytest/executor.hpp>
#include <psytest/session_log.hpp>

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace psytest::gateway {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path tests_dir;
    std::filesystem::path session_log;
    /// Whether respondents may fetch their interpretation.
    bool reveal_results = false;
    std::chrono::minutes idle_timeout{30};
};

/// Reads the optional JSON config file; keys mirror the `serve` flags
/// (`host`, `port`, `tests_dir`, `session_log`, `reveal_results`,
/// `idle_timeout_minutes`). Missing keys keep the values in `base`.
ServiceConfig parse_service_config(std::string_view text, ServiceConfig base);

struct Response {
    int status = 200;
    nlohmann::ordered_json body;
};

/// Transport-independent request handling for the respondent-facing API.
///
/// Tests are loaded once and shared read-only. Each live session has its own
/// lock, so answers to one session are applied one at a time while distinct
/// sessions proceed in parallel. A session is written to the log when its
/// last answer arrives and forgotten after `idle_timeout` without activity.
class Service {
public:
    using Clock = std::function<Timestamp()>;
    using IdGenerator = std::function<std::string()>;

    /// Loads every `*.ptest.json` under `config.tests_dir`; an invalid file aborts startup.
    explicit Service(ServiceConfig config, Clock clock = now_utc);
    Service(ServiceConfig config, std::vector<TestDefinition> tests, Clock clock = now_utc);

    void set_id_generator(IdGenerator generator);

    Response list_tests() const;
    Response get_test(std::string_view test_id) const;
    Response create_session(std::string_view body);
    Response current(std::string_view session_id);
    Response answer(std::string_view session_id, std::string_view body);
    Response result(std::string_view session_id);

    /// Drops sessions idle for longer than the timeout; returns how many.
    std::size_t expire_idle();
    std::size_t live_sessions() const;

    const ServiceConfig &config() const noexcept { return config_; }

private:
    struct Entry {
        std::mutex mutex;
        std::shared_ptr<const TestDefinition> test;
        Session session;
        std::optional<SessionResult> result;
        std::atomic<Timestamp::rep> last_activity{0};
    };

    std::shared_ptr<Entry> find_session(std::string_view id) const;
    nlohmann::ordered_json current_payload(const Entry &entry) const;

    ServiceConfig config_;
    Clock clock_;
    std::map<std::string, std::shared_ptr<const TestDefinition>, std::less<>> tests_;
    SessionLog log_;

    mutable std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
    IdGenerator next_id_;
};

/// Maps the HTTP routes onto `service`.
void install_routes(httplib::Server &server, Service &service);

/// Error body `{code, message}` and the HTTP status for an error code.
Response error_response(ErrorCode code, std::string_view message);

} // namespace psytest::gateway
