#include "duplex/attr.hpp"

#include <cmath>

#include "duplex/error.hpp"

namespace duplex {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::UnknownEdge: return "UnknownEdge";
        case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::EmptySelection: return "EmptySelection";
        case ErrorCode::NotScalar: return "NotScalar";
        case ErrorCode::UnknownGraph: return "UnknownGraph";
        case ErrorCode::UnknownAttr: return "UnknownAttr";
        case ErrorCode::UnknownCoupling: return "UnknownCoupling";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::CouplingMismatch: return "CouplingMismatch";
        case ErrorCode::GraphMismatch: return "GraphMismatch";
        case ErrorCode::EmptyDistribution: return "EmptyDistribution";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnresolvedReference: return "UnresolvedReference";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

std::string_view to_string(ValueKind kind) {
    switch (kind) {
        case ValueKind::Scalar: return "scalar";
        case ValueKind::Text: return "text";
        case ValueKind::TermSet: return "termset";
        case ValueKind::Distribution: return "distribution";
    }
    return "?";
}

std::optional<ValueKind> parse_value_kind(std::string_view name) {
    if (name == "scalar") return ValueKind::Scalar;
    if (name == "text") return ValueKind::Text;
    if (name == "termset") return ValueKind::TermSet;
    if (name == "distribution") return ValueKind::Distribution;
    return std::nullopt;
}

Distribution::Distribution(std::vector<Entry> entries) {
    for (auto& [term, count] : entries) add(std::move(term), count);
}

void Distribution::add(std::string term, double count) {
    if (!std::isfinite(count) || count < 0.0)
        throw Error(ErrorCode::InvalidArgument, "distribution count must be finite and >= 0", term);
    for (const auto& e : entries_)
        if (e.first == term) throw Error(ErrorCode::DuplicateId, "duplicate distribution term", term);
    entries_.emplace_back(std::move(term), count);
}

double Distribution::count(std::string_view term) const {
    for (const auto& [t, c] : entries_)
        if (t == term) return c;
    return 0.0;
}

double Distribution::total() const {
    double sum = 0.0;
    for (const auto& e : entries_) sum += e.second;
    return sum;
}

AttrValue::AttrValue(double v) : value_(v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "scalar attribute must be finite");
}

double AttrValue::scalar() const {
    if (const auto* v = std::get_if<double>(&value_)) return *v;
    throw Error(ErrorCode::KindMismatch, "attribute is not a scalar");
}

const std::string& AttrValue::text() const {
    if (const auto* v = std::get_if<std::string>(&value_)) return *v;
    throw Error(ErrorCode::KindMismatch, "attribute is not text");
}

const TermSet& AttrValue::terms() const {
    if (const auto* v = std::get_if<TermSet>(&value_)) return *v;
    throw Error(ErrorCode::KindMismatch, "attribute is not a term set");
}

const Distribution& AttrValue::distribution() const {
    if (const auto* v = std::get_if<Distribution>(&value_)) return *v;
    throw Error(ErrorCode::KindMismatch, "attribute is not a distribution");
}

} // namespace duplex
