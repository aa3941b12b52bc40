#include "duplex/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "duplex/error.hpp"

namespace duplex {

namespace {

Error csv_error(const std::string& source, std::size_t line, const std::string& what) {
    return Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what,
                 "line " + std::to_string(line));
}

} // namespace

CsvTable parse_csv(std::string_view text, const std::string& source) {
    CsvTable table;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t row_line = 1;

    // Skip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        table.rows.push_back(std::move(row));
        table.lines.push_back(row_line);
        row.clear();
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                    if (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '\n' && text[i + 1] != '\r')
                        throw csv_error(source, line, "unexpected character after closing quote");
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw csv_error(source, line, "quote inside unquoted field");
                quoted = true;
                field_started = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                [[fallthrough]];
            case '\n':
                end_row();
                ++line;
                row_line = line;
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) throw csv_error(source, line, "unterminated quoted field");
    if (field_started || !row.empty()) end_row();
    return table;
}

namespace {

CsvTable parse_with_header(std::string_view text, const std::string& source,
                           const std::vector<std::string>& header) {
    CsvTable t = parse_csv(text, source);
    if (t.rows.empty()) throw csv_error(source, 1, "missing header");
    if (t.rows.front() != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw csv_error(source, t.lines.front(), "expected header '" + want + "'");
    }
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        // Blank lines are tolerated.
        if (t.rows[r].size() == 1 && t.rows[r][0].empty()) continue;
        if (t.rows[r].size() != header.size())
            throw csv_error(source, t.lines[r],
                            "expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(t.rows[r].size()));
    }
    return t;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

std::vector<VoteRecord> parse_votes_csv(std::string_view text, const std::string& source) {
    CsvTable t = parse_with_header(text, source, {"arbiter", "proposal", "vote"});
    std::vector<VoteRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() == 1) continue;
        VoteRecord rec{row[0], row[1], Vote::For};
        if (rec.arbiter.empty() || rec.proposal.empty())
            throw csv_error(source, t.lines[r], "arbiter and proposal must not be empty");
        const std::string v = upper(row[2]);
        if (v == "FOR")
            rec.vote = Vote::For;
        else if (v == "AGAINST")
            rec.vote = Vote::Against;
        else
            throw csv_error(source, t.lines[r], "vote must be FOR or AGAINST, got '" + row[2] + "'");
        if (!seen.emplace(rec.arbiter, rec.proposal).second)
            throw csv_error(source, t.lines[r], "duplicate vote by '" + rec.arbiter + "' on '" + rec.proposal + "'");
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<TermUsageRecord> parse_terms_csv(std::string_view text, const std::string& source) {
    CsvTable t = parse_with_header(text, source, {"person", "term", "count"});
    std::vector<TermUsageRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() == 1) continue;
        TermUsageRecord rec{row[0], row[1], 0};
        if (rec.person.empty() || rec.term.empty())
            throw csv_error(source, t.lines[r], "person and term must not be empty");
        const auto& c = row[2];
        auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), rec.count);
        if (ec != std::errc() || ptr != c.data() + c.size() || rec.count <= 0)
            throw csv_error(source, t.lines[r], "count must be a positive integer, got '" + c + "'");
        if (!seen.emplace(rec.person, rec.term).second)
            throw csv_error(source, t.lines[r], "duplicate usage of '" + rec.term + "' by '" + rec.person + "'");
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<VoteRecord> read_votes_csv(const std::filesystem::path& path) {
    return parse_votes_csv(read_text_file(path), path.string());
}

std::vector<TermUsageRecord> read_terms_csv(const std::filesystem::path& path) {
    return parse_terms_csv(read_text_file(path), path.string());
}

std::vector<std::string> read_term_list(const std::filesystem::path& path) {
    std::vector<std::string> out;
    std::string text = read_text_file(path);
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        if (!line.empty() && line.front() != '#') out.push_back(line);
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

Graph build_agreement_graph(std::span<const VoteRecord> records, const std::string& graph_id) {
    // proposal -> (arbiter -> vote), both ordered.
    std::map<std::string, std::map<std::string, Vote>> by_proposal;
    std::map<std::string, int> participation;
    for (const auto& r : records) {
        if (!by_proposal[r.proposal].emplace(r.arbiter, r.vote).second)
            throw Error(ErrorCode::DuplicateId, "duplicate vote by '" + r.arbiter + "' on '" + r.proposal + "'",
                        r.arbiter);
        ++participation[r.arbiter];
    }

    struct Tally {
        int covotes = 0;
        int same = 0;
    };
    std::map<std::pair<std::string, std::string>, Tally> pairs;
    for (const auto& [proposal, voters] : by_proposal) {
        for (auto a = voters.begin(); a != voters.end(); ++a) {
            for (auto b = std::next(a); b != voters.end(); ++b) {
                Tally& t = pairs[{a->first, b->first}];
                ++t.covotes;
                if (a->second == b->second) ++t.same;
            }
        }
    }

    Graph g(graph_id, GraphOptions{}, {{"votes", ValueKind::Scalar}},
            {{"agreement", ValueKind::Scalar}, {"covotes", ValueKind::Scalar}});
    for (const auto& [arbiter, count] : participation) g.add_node(arbiter, arbiter, {{"votes", count}});
    for (const auto& [pair, t] : pairs) {
        const double agreement = static_cast<double>(t.same) / static_cast<double>(t.covotes);
        g.add_edge(pair.first, pair.second, {{"agreement", agreement}, {"covotes", t.covotes}});
    }
    return g;
}

LexicalBuild build_lexical_graph(std::span<const TermUsageRecord> records, int min_df,
                                 const std::vector<std::string>& reference_terms, const std::string& graph_id) {
    if (min_df < 1) throw Error(ErrorCode::InvalidArgument, "min_df must be >= 1", "min_df");
    std::set<std::string> unique_refs;
    for (const auto& t : reference_terms)
        if (!unique_refs.insert(t).second)
            throw Error(ErrorCode::DuplicateId, "duplicate reference term '" + t + "'", t);

    std::map<std::string, std::map<std::string, std::int64_t>> usage;  // person -> term -> count
    std::map<std::string, int> df;
    for (const auto& r : records) {
        if (r.count <= 0) throw Error(ErrorCode::InvalidArgument, "term count must be positive", r.term);
        if (!usage[r.person].emplace(r.term, r.count).second)
            throw Error(ErrorCode::DuplicateId, "duplicate usage of '" + r.term + "' by '" + r.person + "'",
                        r.person);
        ++df[r.term];
    }

    LexicalBuild out;
    out.terms = Graph(graph_id, GraphOptions{}, {{"df", ValueKind::Scalar}}, {});
    std::set<std::string> surviving;
    for (const auto& [term, freq] : df) {
        if (freq < min_df) continue;
        surviving.insert(term);
        out.terms.add_node(term, term, {{"df", freq}});
    }
    for (const auto& [person, terms] : usage) {
        TermSet vocab;
        for (const auto& [term, count] : terms)
            if (surviving.count(term)) vocab.insert(term);
        out.vocabulary.emplace(person, std::move(vocab));
        if (!reference_terms.empty()) {
            Distribution d;
            for (const auto& ref : reference_terms) {
                auto it = terms.find(ref);
                d.add(ref, it == terms.end() ? 0.0 : static_cast<double>(it->second));
            }
            out.profiles.emplace(person, std::move(d));
        }
    }
    return out;
}

void attach_vocabulary(Graph& social, const LexicalBuild& lexical, const std::string& vocab_attr,
                       const std::string& profile_attr) {
    social.declare_node_attr(vocab_attr, ValueKind::TermSet);
    const bool with_profile = !lexical.profiles.empty();
    if (with_profile) social.declare_node_attr(profile_attr, ValueKind::Distribution);

    // Reference order, for people without any usage record.
    Distribution zero;
    if (with_profile)
        for (const auto& [term, count] : lexical.profiles.begin()->second.entries()) zero.add(term, 0.0);

    std::vector<std::string> ids;
    for (const auto& n : social.nodes()) ids.push_back(n.id);
    for (const auto& id : ids) {
        auto v = lexical.vocabulary.find(id);
        social.set_node_attr(id, vocab_attr, v == lexical.vocabulary.end() ? TermSet{} : v->second);
        if (with_profile) {
            auto p = lexical.profiles.find(id);
            social.set_node_attr(id, profile_attr, p == lexical.profiles.end() ? zero : p->second);
        }
    }
}

Workspace build_coupled_workspace(Graph social, const LexicalBuild& lexical) {
    attach_vocabulary(social, lexical);
    Workspace ws;
    const std::string social_id = social.id();
    const std::string terms_id = lexical.terms.id();

    GraphStyle social_style;
    if (social.node_schema().count("votes")) social_style.node_color_attr = social_style.node_size_attr = "votes";
    if (social.edge_schema().count("agreement"))
        social_style.edge_color_attr = social_style.edge_width_attr = "agreement";
    ws.styles.graphs[social_id] = social_style;
    GraphStyle term_style;
    term_style.node_color_attr = term_style.node_size_attr = "df";
    ws.styles.graphs[terms_id] = term_style;

    ws.add_graph(std::move(social));
    ws.add_graph(lexical.terms);
    ws.define_coupling(Coupling{"vocab", social_id, terms_id, "vocab", std::string(kNodeKey), RelationOp::KeyIn});
    return ws;
}

} // namespace duplex
