#pragma once

#include <psytest/decimal.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psytest {

/// Opaque identifier distinguished by tag so item and category ids cannot be mixed up.
template <typename Tag>
struct Id {
    std::string value;

    Id() = default;
    explicit Id(std::string v) : value(std::move(v)) {}

    friend auto operator<=>(const Id &, const Id &) = default;
    friend bool operator==(const Id &, const Id &) = default;
};

using ItemId = Id<struct ItemTag>;
using CategoryId = Id<struct CategoryTag>;

/// The answer options shared by every item of a test. Score tuples index into
/// `options`, so the order is part of the scoring contract.
struct AnswerSet {
    std::vector<std::string> options;

    std::size_t size() const noexcept { return options.size(); }
    friend bool operator==(const AnswerSet &, const AnswerSet &) = default;
};

struct Item {
    ItemId id;
    int ordinal = 0; ///< presentation position, 1..m
    std::string text;

    friend bool operator==(const Item &, const Item &) = default;
};

/// A psychological category (personality characteristic); its scale carries the same name.
struct Category {
    CategoryId id;
    std::string name;

    friend bool operator==(const Category &, const Category &) = default;
};

/// Points awarded per answer option; `values[i]` is the score for option i.
struct ScoreTuple {
    std::vector<Decimal> values;

    Decimal min() const;
    Decimal max() const;
    friend bool operator==(const ScoreTuple &, const ScoreTuple &) = default;
};

/// One record of the scale relation: category c scores item q with tuple f_c(q).
struct ScaleBinding {
    CategoryId category_id;
    ItemId item_id;
    ScoreTuple tuple;

    friend bool operator==(const ScaleBinding &, const ScaleBinding &) = default;
};

/// One interval of a category's norm partition plus its interpretation.
///
/// Band 1 is `[lower, upper]`; every later band is `(lower, upper]`.
struct Band {
    CategoryId category_id;
    int index = 0; ///< 1..l_c
    Decimal lower;
    Decimal upper;
    std::string interpretation;

    bool closed_lower() const noexcept { return index == 1; }
    bool contains(Decimal score) const noexcept
    {
        return (closed_lower() ? lower <= score : lower < score) && score <= upper;
    }
    friend bool operator==(const Band &, const Band &) = default;
};

enum class DemographicKind { text, integer, choice };

struct DemographicField {
    std::string name;
    DemographicKind kind = DemographicKind::text;
    std::vector<std::string> choices; ///< only for `choice`

    friend bool operator==(const DemographicField &, const DemographicField &) = default;
};

std::string_view to_string(DemographicKind kind) noexcept;
std::optional<DemographicKind> parse_demographic_kind(std::string_view text) noexcept;

struct TestDefinition {
    std::string test_id;
    std::string title;
    std::string instruction;
    AnswerSet answer_set;
    std::vector<Item> items;
    std::vector<Category> categories;
    std::vector<ScaleBinding> bindings;
    std::vector<Band> bands;
    std::vector<DemographicField> demographics;
    /// Serial for the next generated item id; ids are never handed out twice.
    std::uint64_t next_item_seq = 1;

    const Item *find_item(const ItemId &id) const;
    const Item *item_at(int ordinal) const;
    const Category *find_category(const CategoryId &id) const;
    const Category *find_category_by_name(std::string_view name) const;
    const ScaleBinding *find_binding(const CategoryId &c, const ItemId &q) const;

    /// Items sorted by ordinal.
    std::vector<const Item *> items_in_order() const;
    std::vector<const ScaleBinding *> bindings_for(const CategoryId &c) const;
    /// Items scored by category c (the subset T_c of the item set).
    std::vector<ItemId> bound_items(const CategoryId &c) const;
    /// Bands of category c sorted by index.
    std::vector<Band> bands_for(const CategoryId &c) const;
    /// Items bound to no category; presented but never scored.
    std::vector<ItemId> inert_items() const;

    friend bool operator==(const TestDefinition &, const TestDefinition &) = default;
};

struct CategoryResult {
    CategoryId category_id;
    Decimal raw_score;
    int band_index = 0;
    std::string interpretation;

    friend bool operator==(const CategoryResult &, const CategoryResult &) = default;
};

} // namespace psytest
