#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace duplex {

enum class ValueKind { Scalar, Text, TermSet, Distribution };

// Reserved attribute selector meaning "the node id, as Text".
inline constexpr std::string_view kNodeKey = "NODE_KEY";

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> parse_value_kind(std::string_view name);

using TermSet = std::set<std::string>;

/// Ordered term -> non-negative count mapping. Insertion order is kept
/// because glyph sectors follow the declared term order.
class Distribution {
public:
    using Entry = std::pair<std::string, double>;

    Distribution() = default;
    explicit Distribution(std::vector<Entry> entries);

    void add(std::string term, double count);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    double count(std::string_view term) const;
    double total() const;
    bool empty() const noexcept { return entries_.empty(); }

    bool operator==(const Distribution&) const = default;

private:
    std::vector<Entry> entries_;
};

/// A typed attribute value. Scalars are always finite.
class AttrValue {
public:
    using Storage = std::variant<double, std::string, TermSet, Distribution>;

    AttrValue(double v);
    AttrValue(int v) : AttrValue(static_cast<double>(v)) {}
    AttrValue(std::string v) : value_(std::move(v)) {}
    AttrValue(const char* v) : value_(std::string(v)) {}
    AttrValue(TermSet v) : value_(std::move(v)) {}
    AttrValue(Distribution v) : value_(std::move(v)) {}

    ValueKind kind() const noexcept { return static_cast<ValueKind>(value_.index()); }

    bool is_scalar() const noexcept { return kind() == ValueKind::Scalar; }

    double scalar() const;
    const std::string& text() const;
    const TermSet& terms() const;
    const Distribution& distribution() const;

    const Storage& storage() const noexcept { return value_; }

    bool operator==(const AttrValue&) const = default;

private:
    Storage value_;
};

using AttrMap = std::map<std::string, AttrValue>;
using Schema = std::map<std::string, ValueKind>;

} // namespace duplex
