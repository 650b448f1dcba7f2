#include <psytest/executor.hpp>
#include <psytest/error.hpp>
#include <psytest/generator.hpp>
#include <psytest/validate.hpp>

#include <fmt/format.h>

#include <algorithm>

namespace psytest {

std::string_view to_string(SessionState state) noexcept
{
    switch (state) {
    case SessionState::collecting_demographics: return "collecting_demographics";
    case SessionState::in_progress: return "in_progress";
    case SessionState::completed: return "completed";
    }
    return "in_progress";
}

namespace {

[[noreturn]] void bad_demographics(std::string message)
{
    throw Error(ErrorCode::invalid_demographics, message);
}

void check_demographics(const TestDefinition &test, const Demographics &demographics)
{
    for (const auto &field : test.demographics) {
        auto it = demographics.find(field.name);
        if (it == demographics.end())
            bad_demographics(fmt::format("demographic field '{}' is missing", field.name));
        const DemographicValue &value = it->second;
        switch (field.kind) {
        case DemographicKind::integer:
            if (!std::holds_alternative<std::int64_t>(value))
                bad_demographics(fmt::format("demographic field '{}' must be an integer", field.name));
            break;
        case DemographicKind::text:
            if (!std::holds_alternative<std::string>(value) || std::get<std::string>(value).empty())
                bad_demographics(fmt::format("demographic field '{}' must be non-empty text", field.name));
            break;
        case DemographicKind::choice: {
            const auto *s = std::get_if<std::string>(&value);
            if (!s || std::find(field.choices.begin(), field.choices.end(), *s) == field.choices.end())
                bad_demographics(fmt::format("demographic field '{}' must be one of: {}", field.name,
                                             fmt::join(field.choices, ", ")));
            break;
        }
        }
    }
    for (const auto &[name, value] : demographics) {
        const bool declared = std::any_of(test.demographics.begin(), test.demographics.end(),
                                          [&](const DemographicField &f) { return f.name == name; });
        if (!declared)
            bad_demographics(fmt::format("'{}' is not a demographic field of this test", name));
    }
}

} // namespace

Session open_session(const TestDefinition &test, SessionId id, Timestamp now)
{
    auto violations = validate(test);
    if (has_errors(violations)) {
        std::erase_if(violations, [](const Violation &v) { return v.severity != Severity::error; });
        throw InvalidTestError(std::move(violations));
    }
    Session session;
    session.session_id = std::move(id);
    session.test_id = test.test_id;
    session.started_at = now;
    return session;
}

Session record_demographics(Session session, const TestDefinition &test, Demographics demographics)
{
    if (session.state != SessionState::collecting_demographics)
        throw Error(ErrorCode::invalid_demographics, "demographics were already recorded for this session");
    check_demographics(test, demographics);
    session.demographics = std::move(demographics);
    session.state = SessionState::in_progress;
    return session;
}

Session start_session(const TestDefinition &test, Demographics demographics, SessionId id, Timestamp now)
{
    return record_demographics(open_session(test, std::move(id), now), test, std::move(demographics));
}

std::optional<Item> current_item(const Session &session, const TestDefinition &test)
{
    // Answers follow ordinal order, so the next item is at ordinal |answers| + 1.
    const auto ordered = test.items_in_order();
    if (session.answers.size() >= ordered.size())
        return std::nullopt;
    return *ordered[session.answers.size()];
}

Session submit_answer(Session session, const TestDefinition &test, std::size_t answer_index, Timestamp now)
{
    switch (session.state) {
    case SessionState::collecting_demographics:
        throw Error(ErrorCode::session_not_started, "demographics have not been recorded yet");
    case SessionState::completed:
        throw Error(ErrorCode::session_completed, "session is already completed");
    case SessionState::in_progress:
        break;
    }
    if (answer_index >= test.answer_set.size())
        throw Error(ErrorCode::answer_out_of_range,
                    fmt::format("answer index {} outside 0..{}", answer_index, test.answer_set.size() - 1));
    const auto item = current_item(session, test);
    if (!item)
        throw Error(ErrorCode::session_completed, "every item has already been answered");
    session.answers.push_back({item->id, answer_index, now});
    if (session.answers.size() == test.items.size()) {
        session.state = SessionState::completed;
        session.completed_at = now;
    }
    return session;
}

AnswerMap answer_map(const Session &session)
{
    AnswerMap answers;
    for (const auto &a : session.answers)
        answers.emplace(a.item_id, a.answer_index);
    return answers;
}

SessionResult score_session(const Session &session, const TestDefinition &test)
{
    if (session.state != SessionState::completed)
        throw Error(ErrorCode::session_incomplete, "only completed sessions can be scored");
    if (session.test_id != test.test_id)
        throw Error(ErrorCode::test_mismatch,
                    fmt::format("session belongs to test '{}', not '{}'", session.test_id, test.test_id));
    const AnswerMap answers = answer_map(session);
    SessionResult result{session.session_id, {}};
    for (const auto &category : test.categories) {
        const Decimal raw = raw_score(test, category.id, answers);
        Band band = band_of(test, category.id, raw);
        result.categories.push_back({category.id, raw, band.index, std::move(band.interpretation)});
    }
    return result;
}

} // namespace psytest
