#include <psytest/model.hpp>

#include <algorithm>
#include <set>

namespace psytest {

Decimal ScoreTuple::min() const
{
    return *std::min_element(values.begin(), values.end());
}

Decimal ScoreTuple::max() const
{
    return *std::max_element(values.begin(), values.end());
}

std::string_view to_string(DemographicKind kind) noexcept
{
    switch (kind) {
    case DemographicKind::text: return "text";
    case DemographicKind::integer: return "integer";
    case DemographicKind::choice: return "choice";
    }
    return "text";
}

std::optional<DemographicKind> parse_demographic_kind(std::string_view text) noexcept
{
    if (text == "text")
        return DemographicKind::text;
    if (text == "integer")
        return DemographicKind::integer;
    if (text == "choice")
        return DemographicKind::choice;
    return std::nullopt;
}

const Item *TestDefinition::find_item(const ItemId &id) const
{
    auto it = std::find_if(items.begin(), items.end(), [&](const Item &i) { return i.id == id; });
    return it == items.end() ? nullptr : &*it;
}

const Item *TestDefinition::item_at(int ordinal) const
{
    auto it = std::find_if(items.begin(), items.end(), [&](const Item &i) { return i.ordinal == ordinal; });
    return it == items.end() ? nullptr : &*it;
}

const Category *TestDefinition::find_category(const CategoryId &id) const
{
    auto it = std::find_if(categories.begin(), categories.end(), [&](const Category &c) { return c.id == id; });
    return it == categories.end() ? nullptr : &*it;
}

const Category *TestDefinition::find_category_by_name(std::string_view name) const
{
    auto it = std::find_if(categories.begin(), categories.end(), [&](const Category &c) { return c.name == name; });
    return it == categories.end() ? nullptr : &*it;
}

const ScaleBinding *TestDefinition::find_binding(const CategoryId &c, const ItemId &q) const
{
    auto it = std::find_if(bindings.begin(), bindings.end(),
                           [&](const ScaleBinding &b) { return b.category_id == c && b.item_id == q; });
    return it == bindings.end() ? nullptr : &*it;
}

std::vector<const Item *> TestDefinition::items_in_order() const
{
    std::vector<const Item *> out;
    out.reserve(items.size());
    for (const auto &item : items)
        out.push_back(&item);
    std::stable_sort(out.begin(), out.end(), [](const Item *a, const Item *b) { return a->ordinal < b->ordinal; });
    return out;
}

std::vector<const ScaleBinding *> TestDefinition::bindings_for(const CategoryId &c) const
{
    std::vector<const ScaleBinding *> out;
    for (const auto &b : bindings)
        if (b.category_id == c)
            out.push_back(&b);
    return out;
}

std::vector<ItemId> TestDefinition::bound_items(const CategoryId &c) const
{
    std::vector<ItemId> out;
    for (const auto &b : bindings)
        if (b.category_id == c)
            out.push_back(b.item_id);
    return out;
}

std::vector<Band> TestDefinition::bands_for(const CategoryId &c) const
{
    std::vector<Band> out;
    for (const auto &b : bands)
        if (b.category_id == c)
            out.push_back(b);
    std::stable_sort(out.begin(), out.end(), [](const Band &a, const Band &b) { return a.index < b.index; });
    return out;
}

std::vector<ItemId> TestDefinition::inert_items() const
{
    std::set<ItemId> bound;
    for (const auto &b : bindings)
        bound.insert(b.item_id);
    std::vector<ItemId> out;
    for (const Item *item : items_in_order())
        if (!bound.contains(item->id))
            out.push_back(item->id);
    return out;
}

} // namespace psytest
