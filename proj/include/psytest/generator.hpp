#pragma once

#include <psytest/error.hpp>
#include <psytest/model.hpp>
#include <psytest/validate.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psytest {

/// Authoring operations. Every function takes a test by value and returns
/// the edited copy; the input is never modified.
namespace generator {

TestDefinition new_test(std::string test_id, std::string title, std::vector<std::string> answer_options,
                        std::string instruction = {});

TestDefinition set_instruction(TestDefinition test, std::string instruction);

/// Replaces the answer options. Refused with `ANSWER_SET_LOCKED` once any
/// binding exists, since tuples index into the option list.
TestDefinition set_answer_set(TestDefinition test, std::vector<std::string> options);

/// Adds a category named `name`; the id defaults to `c<N>`.
TestDefinition add_category(TestDefinition test, std::string name, std::optional<CategoryId> id = {});

TestDefinition add_demographic_field(TestDefinition test, DemographicField field);

/// Inserts a new item at `position` (1..m+1), shifting later items down by one.
TestDefinition insert_item(TestDefinition test, int position, std::string text);

/// Removes the item at `ordinal` together with all of its bindings and closes the gap.
TestDefinition delete_item(TestDefinition test, int ordinal);

/// Moves the item at `from` to `to`, keeping its id and bindings.
TestDefinition move_item(TestDefinition test, int from, int to);

/// Upserts the scale binding for (c, q).
TestDefinition bind_scale(TestDefinition test, const CategoryId &c, const ItemId &q, ScoreTuple tuple);

/// Replaces the bands of c with `[b0, b1], (b1, b2], ..., (b_{l-1}, b_l]`.
///
/// `boundaries` must be strictly increasing with `b0 = m_c` and `b_l = M_c`
/// for the current bindings, and `texts` must hold exactly l non-empty
/// interpretations.
TestDefinition set_bands(TestDefinition test, const CategoryId &c, std::span<const Decimal> boundaries,
                         std::span<const std::string> texts);

} // namespace generator

struct TestDocument {
    static constexpr int current_format_version = 1;

    int format_version = current_format_version;
    TestDefinition test;

    friend bool operator==(const TestDocument &, const TestDocument &) = default;
};

/// Whether serialization and parsing insist on a clean `validate` result.
/// Drafts are written and read with `skip` while a test is being authored.
enum class Validation { enforce, skip };

/// Thrown with `INVALID_TEST` when a document fails validation; carries the
/// offending violations.
class InvalidTestError : public Error {
public:
    explicit InvalidTestError(std::vector<Violation> violations);

    const std::vector<Violation> &violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// `.ptest.json` text. Decimals are written as strings.
std::string serialize_test(const TestDocument &doc, Validation mode = Validation::enforce);
TestDocument parse_test(std::string_view text, Validation mode = Validation::enforce);

} // namespace psytest
