#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duplex/graph.hpp"
#include "duplex/workspace.hpp"

namespace duplex {

/// RFC 4180 reader: comma separated, double-quoted fields with "" escapes,
/// quoted fields may span lines, LF or CRLF record ends. `lines[i]` is the
/// 1-based line where row i starts.
struct CsvTable {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;
};

CsvTable parse_csv(std::string_view text, const std::string& source = "<memory>");

enum class Vote { For, Against };

struct VoteRecord {
    std::string arbiter;
    std::string proposal;
    Vote vote = Vote::For;
    bool operator==(const VoteRecord&) const = default;
};

struct TermUsageRecord {
    std::string person;
    std::string term;
    std::int64_t count = 1;
    bool operator==(const TermUsageRecord&) const = default;
};

// Header `arbiter,proposal,vote`; vote is FOR or AGAINST (case-insensitive).
std::vector<VoteRecord> parse_votes_csv(std::string_view text, const std::string& source = "<memory>");
std::vector<VoteRecord> read_votes_csv(const std::filesystem::path& path);
// Header `person,term,count`; count is a positive integer.
std::vector<TermUsageRecord> parse_terms_csv(std::string_view text, const std::string& source = "<memory>");
std::vector<TermUsageRecord> read_terms_csv(const std::filesystem::path& path);

/// One node per arbiter (Scalar `votes`: distinct proposals voted on) and
/// one undirected edge per co-voting pair with Scalar `agreement` (share of
/// co-voted proposals with identical votes) and Scalar `covotes`.
/// Nodes and edges are emitted in sorted order, so record order is
/// irrelevant. Throws DuplicateId on a repeated (arbiter, proposal).
Graph build_agreement_graph(std::span<const VoteRecord> records, const std::string& graph_id = "arbiters");

struct LexicalBuild {
    Graph terms;
    // Surviving vocabulary per person.
    std::map<std::string, TermSet> vocabulary;
    // Counts over the reference terms, in reference order, per person.
    std::map<std::string, Distribution> profiles;
};

/// Term nodes with document frequency >= min_df, Scalar attr `df`; no edges.
LexicalBuild build_lexical_graph(std::span<const TermUsageRecord> records, int min_df,
                                 const std::vector<std::string>& reference_terms = {},
                                 const std::string& graph_id = "terms");

/// Adds TermSet `vocab_attr` (and Distribution `profile_attr` when
/// reference terms were configured) to every node of `social`.
void attach_vocabulary(Graph& social, const LexicalBuild& lexical, const std::string& vocab_attr = "vocab",
                       const std::string& profile_attr = "profile");

/// Social graph plus lexical graph, with the key_in coupling `vocab`
/// (social.vocab -> terms.NODE_KEY) and default style bindings.
Workspace build_coupled_workspace(Graph social, const LexicalBuild& lexical);

std::vector<std::string> read_term_list(const std::filesystem::path& path);

} // namespace duplex
