#include <psytest/service.hpp>
#include <psytest/error.hpp>
#include <psytest/generator.hpp>

#include <fmt/format.h>
#include <httplib.h>

#include <random>

namespace psytest::gateway {

using json = nlohmann::ordered_json;

namespace {

int status_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::unknown_test:
    case ErrorCode::unknown_session:
    case ErrorCode::result_withheld:
    case ErrorCode::session_incomplete:
        return 404;
    case ErrorCode::session_completed:
    case ErrorCode::out_of_order:
        return 409;
    case ErrorCode::io_error:
        return 500;
    default:
        return 400;
    }
}

Demographics parse_demographics(const json &obj)
{
    if (obj.is_null())
        return {};
    if (!obj.is_object())
        throw Error(ErrorCode::malformed_request, "'demographics' must be an object");
    Demographics out;
    for (const auto &[name, value] : obj.items()) {
        if (value.is_string())
            out.emplace(name, value.get<std::string>());
        else if (value.is_number_integer())
            out.emplace(name, value.get<std::int64_t>());
        else
            throw Error(ErrorCode::invalid_demographics,
                        fmt::format("demographic '{}' must be a string or an integer", name));
    }
    return out;
}

json parse_body(std::string_view body)
{
    json parsed = json::parse(body.begin(), body.end(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw Error(ErrorCode::malformed_request, "request body must be a JSON object");
    return parsed;
}

std::string random_session_id()
{
    static std::mutex mutex;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mutex);
    return fmt::format("{:016x}{:016x}", rng(), rng());
}

template <typename F>
Response guarded(F &&handler)
{
    try {
        return handler();
    } catch (const Error &e) {
        return error_response(e.code(), e.what());
    }
}

} // namespace

Response error_response(ErrorCode code, std::string_view message)
{
    return {status_for(code), json{{"code", to_string(code)}, {"message", message}}};
}

ServiceConfig parse_service_config(std::string_view text, ServiceConfig base)
{
    const json root = json::parse(text.begin(), text.end(), nullptr, false);
    if (root.is_discarded() || !root.is_object())
        throw Error(ErrorCode::malformed_input, "config file must be a JSON object");
    try {
        if (root.contains("host"))
            base.host = root["host"].get<std::string>();
        if (root.contains("port"))
            base.port = root["port"].get<int>();
        if (root.contains("tests_dir"))
            base.tests_dir = root["tests_dir"].get<std::string>();
        if (root.contains("session_log"))
            base.session_log = root["session_log"].get<std::string>();
        if (root.contains("reveal_results"))
            base.reveal_results = root["reveal_results"].get<bool>();
        if (root.contains("idle_timeout_minutes"))
            base.idle_timeout = std::chrono::minutes{root["idle_timeout_minutes"].get<int>()};
    } catch (const json::exception &e) {
        throw Error(ErrorCode::malformed_input, fmt::format("bad config value: {}", e.what()));
    }
    return base;
}

Service::Service(ServiceConfig config, Clock clock)
    : Service(config, {}, std::move(clock))
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(config_.tests_dir))
        throw Error(ErrorCode::io_error, fmt::format("tests directory {} does not exist", config_.tests_dir.string()));
    for (const auto &entry : fs::directory_iterator(config_.tests_dir)) {
        const std::string name = entry.path().filename().string();
        if (!entry.is_regular_file() || !name.ends_with(".ptest.json"))
            continue;
        TestDocument doc;
        try {
            doc = parse_test(read_file(entry.path()));
        } catch (const Error &e) {
            throw Error(e.code(), fmt::format("{}: {}", entry.path().string(), e.what()));
        }
        const std::string id = doc.test.test_id;
        if (!tests_.emplace(id, std::make_shared<const TestDefinition>(std::move(doc.test))).second)
            throw Error(ErrorCode::invalid_test, fmt::format("test id '{}' is defined by more than one file", id));
    }
}

Service::Service(ServiceConfig config, std::vector<TestDefinition> tests, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)), log_(config_.session_log), next_id_(random_session_id)
{
    for (auto &test : tests) {
        auto violations = validate(test);
        if (has_errors(violations))
            throw InvalidTestError(std::move(violations));
        std::string id = test.test_id;
        tests_.emplace(std::move(id), std::make_shared<const TestDefinition>(std::move(test)));
    }
}

void Service::set_id_generator(IdGenerator generator)
{
    next_id_ = std::move(generator);
}

Response Service::list_tests() const
{
    json out = json::array();
    for (const auto &[id, test] : tests_)
        out.push_back({{"test_id", id}, {"title", test->title}});
    return {200, std::move(out)};
}

Response Service::get_test(std::string_view test_id) const
{
    auto it = tests_.find(test_id);
    if (it == tests_.end())
        return error_response(ErrorCode::unknown_test, fmt::format("unknown test '{}'", test_id));
    const TestDefinition &test = *it->second;

    // Respondent-safe: no tuples, bands or interpretations.
    json items = json::array();
    for (const Item *item : test.items_in_order())
        items.push_back({{"ordinal", item->ordinal}, {"text", item->text}});
    json demographics = json::array();
    for (const auto &f : test.demographics) {
        json entry{{"name", f.name}, {"kind", to_string(f.kind)}};
        if (f.kind == DemographicKind::choice)
            entry["choices"] = f.choices;
        demographics.push_back(std::move(entry));
    }
    return {200, json{{"test_id", test.test_id},
                      {"title", test.title},
                      {"instruction", test.instruction},
                      {"options", test.answer_set.options},
                      {"items", std::move(items)},
                      {"demographics", std::move(demographics)}}};
}

Response Service::create_session(std::string_view body)
{
    expire_idle();
    return guarded([&] {
        const json request = parse_body(body);
        if (!request.contains("test_id") || !request["test_id"].is_string())
            throw Error(ErrorCode::malformed_request, "'test_id' is required");
        const std::string test_id = request["test_id"].get<std::string>();
        auto it = tests_.find(test_id);
        if (it == tests_.end())
            throw Error(ErrorCode::unknown_test, fmt::format("unknown test '{}'", test_id));

        const Timestamp now = clock_();
        auto entry = std::make_shared<Entry>();
        entry->test = it->second;
        Demographics demographics = parse_demographics(request.value("demographics", json{}));

        std::lock_guard lock(sessions_mutex_);
        std::string id;
        do {
            id = next_id_();
        } while (sessions_.contains(id));
        entry->session = start_session(*entry->test, std::move(demographics), SessionId{id}, now);
        entry->last_activity = now.time_since_epoch().count();
        sessions_.emplace(id, entry);
        return Response{201, json{{"session_id", id}}};
    });
}

std::shared_ptr<Service::Entry> Service::find_session(std::string_view id) const
{
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw Error(ErrorCode::unknown_session, fmt::format("unknown session '{}'", id));
    return it->second;
}

json Service::current_payload(const Entry &entry) const
{
    const auto item = current_item(entry.session, *entry.test);
    if (!item)
        return json{{"done", true}};
    return json{{"ordinal", item->ordinal},
                {"total", entry.test->items.size()},
                {"text", item->text},
                {"options", entry.test->answer_set.options}};
}

Response Service::current(std::string_view session_id)
{
    expire_idle();
    return guarded([&] {
        auto entry = find_session(session_id);
        std::lock_guard lock(entry->mutex);
        entry->last_activity = clock_().time_since_epoch().count();
        return Response{200, current_payload(*entry)};
    });
}

Response Service::answer(std::string_view session_id, std::string_view body)
{
    expire_idle();
    return guarded([&] {
        const json request = parse_body(body);
        if (!request.contains("answer_index") || !request["answer_index"].is_number_integer())
            throw Error(ErrorCode::malformed_request, "'answer_index' must be an integer");
        const auto index = request["answer_index"].get<std::int64_t>();
        std::optional<int> expected;
        if (request.contains("ordinal")) {
            if (!request["ordinal"].is_number_integer())
                throw Error(ErrorCode::malformed_request, "'ordinal' must be an integer");
            expected = request["ordinal"].get<int>();
        }

        auto entry = find_session(session_id);
        std::lock_guard lock(entry->mutex);
        const Timestamp now = clock_();
        entry->last_activity = now.time_since_epoch().count();
        if (entry->session.state == SessionState::completed)
            throw Error(ErrorCode::session_completed, "session is already completed");
        if (expected) {
            const auto item = current_item(entry->session, *entry->test);
            if (item && item->ordinal != *expected)
                throw Error(ErrorCode::out_of_order,
                            fmt::format("answer targets item {} but the current item is {}", *expected, item->ordinal));
        }
        if (index < 0)
            throw Error(ErrorCode::answer_out_of_range, fmt::format("answer index {} is negative", index));

        Session next = submit_answer(entry->session, *entry->test, static_cast<std::size_t>(index), now);
        if (next.state == SessionState::completed) {
            SessionResult result = score_session(next, *entry->test);
            log_.append(next, result);
            entry->result = std::move(result);
        }
        entry->session = std::move(next);
        return Response{200, current_payload(*entry)};
    });
}

Response Service::result(std::string_view session_id)
{
    expire_idle();
    return guarded([&] {
        auto entry = find_session(session_id);
        std::lock_guard lock(entry->mutex);
        entry->last_activity = clock_().time_since_epoch().count();
        if (!config_.reveal_results)
            throw Error(ErrorCode::result_withheld, "results are not released to respondents");
        if (!entry->result)
            throw Error(ErrorCode::session_incomplete, "session is not completed");
        json categories = json::array();
        for (const auto &r : entry->result->categories) {
            const Category *category = entry->test->find_category(r.category_id);
            categories.push_back({{"category_id", r.category_id.value},
                                  {"category", category ? category->name : std::string{}},
                                  {"raw_score", r.raw_score.to_string()},
                                  {"band_index", r.band_index},
                                  {"interpretation", r.interpretation}});
        }
        return Response{200, json{{"session_id", entry->result->session_id.value}, {"categories", categories}}};
    });
}

std::size_t Service::expire_idle()
{
    const auto cutoff =
        (clock_() - std::chrono::duration_cast<Timestamp::duration>(config_.idle_timeout)).time_since_epoch().count();
    std::lock_guard lock(sessions_mutex_);
    return std::erase_if(sessions_, [&](const auto &kv) { return kv.second->last_activity.load() < cutoff; });
}

std::size_t Service::live_sessions() const
{
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
}

void install_routes(httplib::Server &server, Service &service)
{
    auto send = [](httplib::Response &res, const Response &r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get("/tests", [&, send](const httplib::Request &, httplib::Response &res) {
        send(res, service.list_tests());
    });
    server.Get(R"(/tests/([^/]+))", [&, send](const httplib::Request &req, httplib::Response &res) {
        send(res, service.get_test(req.matches[1].str()));
    });
    server.Post("/sessions", [&, send](const httplib::Request &req, httplib::Response &res) {
        send(res, service.create_session(req.body));
    });
    server.Get(R"(/sessions/([^/]+)/current)", [&, send](const httplib::Request &req, httplib::Response &res) {
        send(res, service.current(req.matches[1].str()));
    });
    server.Post(R"(/sessions/([^/]+)/answer)", [&, send](const httplib::Request &req, httplib::Response &res) {
        send(res, service.answer(req.matches[1].str(), req.body));
    });
    server.Get(R"(/sessions/([^/]+)/result)", [&, send](const httplib::Request &req, httplib::Response &res) {
        send(res, service.result(req.matches[1].str()));
    });
    server.set_error_handler([send](const httplib::Request &, httplib::Response &res) {
        if (res.body.empty())
            send(res, Response{res.status, json{{"code", res.status == 404 ? "NOT_FOUND" : "HTTP_ERROR"},
                                                {"message", httplib::status_message(res.status)}}});
    });
    server.set_exception_handler([send](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception &e) {
            message = e.what();
        } catch (...) {
        }
        send(res, Response{500, json{{"code", "INTERNAL"}, {"message", message}}});
    });
}

} // namespace psytest::gateway
