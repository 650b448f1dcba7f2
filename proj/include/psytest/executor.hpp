#pragma once

#include <psytest/model.hpp>
#include <psytest/scoring.hpp>
#include <psytest/timestamp.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace psytest {

using SessionId = Id<struct SessionTag>;

/// Text and choice fields hold strings, integer fields hold integers.
using DemographicValue = std::variant<std::string, std::int64_t>;
using Demographics = std::map<std::string, DemographicValue>;

enum class SessionState { collecting_demographics, in_progress, completed };

std::string_view to_string(SessionState state) noexcept;

struct AnswerRecord {
    ItemId item_id;
    std::size_t answer_index = 0;
    Timestamp ts;

    friend bool operator==(const AnswerRecord &, const AnswerRecord &) = default;
};

/// One administration of a test to one respondent.
///
/// Answers are appended in ascending ordinal order, one per item, and the
/// session is `completed` exactly when every item has been answered.
struct Session {
    SessionId session_id;
    std::string test_id;
    Demographics demographics;
    std::vector<AnswerRecord> answers;
    SessionState state = SessionState::collecting_demographics;
    Timestamp started_at;
    std::optional<Timestamp> completed_at;

    friend bool operator==(const Session &, const Session &) = default;
};

struct SessionResult {
    SessionId session_id;
    std::vector<CategoryResult> categories; ///< in category declaration order

    friend bool operator==(const SessionResult &, const SessionResult &) = default;
};

/// A session waiting for demographics. Throws `InvalidTestError` if the test
/// does not validate.
Session open_session(const TestDefinition &test, SessionId id, Timestamp now);

/// Checks `demographics` against the test's schema (every declared field
/// present, correctly typed, no undeclared fields) and moves the session to
/// `in_progress`. Throws `INVALID_DEMOGRAPHICS`.
Session record_demographics(Session session, const TestDefinition &test, Demographics demographics);

/// `open_session` followed by `record_demographics`.
Session start_session(const TestDefinition &test, Demographics demographics, SessionId id, Timestamp now);

/// The unanswered item with the smallest ordinal, or nullopt once all are answered.
std::optional<Item> current_item(const Session &session, const TestDefinition &test);

/// Records `answer_index` against the current item. The last answer
/// completes the session and stamps `completed_at`.
Session submit_answer(Session session, const TestDefinition &test, std::size_t answer_index, Timestamp now);

AnswerMap answer_map(const Session &session);

/// Raw score, band and interpretation per category. Only completed sessions
/// are scored.
SessionResult score_session(const Session &session, const TestDefinition &test);

} // namespace psytest
