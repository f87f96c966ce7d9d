#include "eqmat/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "eqmat/fact_store.hpp"
#include "eqmat/representative_map.hpp"
#include "eqmat/term_dictionary.hpp"

namespace eqmat {

namespace {

ResourceId safe_resolve(const RepresentativeMap& rho, ResourceId r) {
    return r <= rho.capacity() ? rho.resolve(r) : r;
}

std::vector<ResourceId> clique_of(const RepresentativeMap& rho, ResourceId rep) {
    if (rep > rho.capacity()) return {rep};
    return rho.clique_members(rep);
}

std::size_t clique_size_of(const RepresentativeMap& rho, ResourceId rep) {
    if (rep > rho.capacity()) return 1;
    return rho.clique_size(rep);
}

struct QueryToken {
    enum Kind { Word, Variable, Iri, Literal, LBrace, RBrace, LParen, RParen, Dot, End };
    Kind kind;
    std::string text;
    std::size_t line;
};

class QueryLexer {
  public:
    explicit QueryLexer(const std::string& text) : text_(text) {}

    QueryToken next() {
        skip_space();
        if (pos_ >= text_.size()) return {QueryToken::End, "", line_};
        char c = text_[pos_];
        switch (c) {
            case '{': ++pos_; return {QueryToken::LBrace, "{", line_};
            case '}': ++pos_; return {QueryToken::RBrace, "}", line_};
            case '(': ++pos_; return {QueryToken::LParen, "(", line_};
            case ')': ++pos_; return {QueryToken::RParen, ")", line_};
            case '.': ++pos_; return {QueryToken::Dot, ".", line_};
            case '?': return lex_variable();
            case '<': return lex_iri();
            case '"': return lex_literal();
            default:
                if (std::isalpha(static_cast<unsigned char>(c))) return lex_word();
                throw QueryParseError(line_, std::string("unexpected character '") + c + "'");
        }
    }

  private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    QueryToken lex_variable() {
        std::size_t start = ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) throw QueryParseError(line_, "empty variable name after '?'");
        return {QueryToken::Variable, text_.substr(start, pos_ - start), line_};
    }

    QueryToken lex_iri() {
        std::size_t start = ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '>' && text_[pos_] != '\n') ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != '>')
            throw QueryParseError(line_, "unterminated IRI");
        std::string iri = text_.substr(start, pos_ - start);
        ++pos_;
        if (iri.empty()) throw QueryParseError(line_, "empty IRI");
        return {QueryToken::Iri, iri, line_};
    }

    QueryToken lex_literal() {
        ++pos_;
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '"') {
                ++pos_;
                return {QueryToken::Literal, out, line_};
            }
            if (c == '\n') break;
            if (c == '\\') {
                ++pos_;
                if (pos_ >= text_.size()) break;
                switch (text_[pos_]) {
                    case '\\': out.push_back('\\'); break;
                    case '"': out.push_back('"'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    default:
                        throw QueryParseError(line_, std::string("unsupported escape '\\") +
                                                         text_[pos_] + "'");
                }
                ++pos_;
                continue;
            }
            out.push_back(c);
            ++pos_;
        }
        throw QueryParseError(line_, "unterminated literal");
    }

    QueryToken lex_word() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return {QueryToken::Word, text_.substr(start, pos_ - start), line_};
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string escape_literal(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

SelectQuery parse_query(const std::string& text, TermDictionary& dict) {
    QueryLexer lexer(text);
    SelectQuery q;
    QueryToken tok = lexer.next();

    std::map<std::string, std::uint32_t> var_ids;
    auto var_id = [&](const std::string& name) {
        auto it = var_ids.find(name);
        if (it != var_ids.end()) return it->second;
        auto id = static_cast<std::uint32_t>(q.var_names.size());
        var_ids.emplace(name, id);
        q.var_names.push_back(name);
        return id;
    };
    auto expect_word = [&](const char* keyword) {
        if (tok.kind != QueryToken::Word || upper(tok.text) != keyword)
            throw QueryParseError(tok.line, std::string("expected ") + keyword);
        tok = lexer.next();
    };

    expect_word("SELECT");
    while (tok.kind == QueryToken::Variable) {
        std::uint32_t v = var_id(tok.text);
        if (std::find(q.projection.begin(), q.projection.end(), v) != q.projection.end())
            throw QueryParseError(tok.line, "duplicate projected variable ?" + tok.text);
        q.projection.push_back(v);
        tok = lexer.next();
    }
    if (q.projection.empty())
        throw QueryParseError(tok.line, "expected at least one projected variable");

    expect_word("WHERE");
    if (tok.kind != QueryToken::LBrace) throw QueryParseError(tok.line, "expected '{'");
    tok = lexer.next();

    // Variables bound so far by a triple pattern or an earlier BIND. A mention
    // in the SELECT clause alone does not bind.
    std::set<std::uint32_t> body_bound;

    auto parse_term = [&]() -> AtomTerm {
        switch (tok.kind) {
            case QueryToken::Variable: {
                AtomTerm t = AtomTerm::var(var_id(tok.text));
                tok = lexer.next();
                return t;
            }
            case QueryToken::Iri: {
                AtomTerm t = AtomTerm::constant(dict.intern_iri(tok.text));
                tok = lexer.next();
                return t;
            }
            case QueryToken::Literal: {
                AtomTerm t = AtomTerm::constant(dict.intern_literal(tok.text));
                tok = lexer.next();
                return t;
            }
            default:
                throw QueryParseError(tok.line, "expected '?NAME', '<IRI>', or '\"STRING\"'");
        }
    };

    while (tok.kind != QueryToken::RBrace) {
        if (tok.kind == QueryToken::Dot) {
            tok = lexer.next();
            continue;
        }
        if (tok.kind == QueryToken::Word) {
            std::size_t bind_line = tok.line;
            expect_word("BIND");
            if (tok.kind != QueryToken::LParen) throw QueryParseError(tok.line, "expected '('");
            tok = lexer.next();
            expect_word("STR");
            if (tok.kind != QueryToken::LParen) throw QueryParseError(tok.line, "expected '('");
            tok = lexer.next();
            if (tok.kind != QueryToken::Variable)
                throw QueryParseError(tok.line, "expected a variable inside STR");
            std::string source_name = tok.text;
            tok = lexer.next();
            if (tok.kind != QueryToken::RParen) throw QueryParseError(tok.line, "expected ')'");
            tok = lexer.next();
            expect_word("AS");
            if (tok.kind != QueryToken::Variable)
                throw QueryParseError(tok.line, "expected a variable after AS");
            std::string target_name = tok.text;
            tok = lexer.next();
            if (tok.kind != QueryToken::RParen) throw QueryParseError(tok.line, "expected ')'");
            tok = lexer.next();

            auto source_it = var_ids.find(source_name);
            if (source_it == var_ids.end() || !body_bound.count(source_it->second))
                throw QueryParseError(bind_line,
                                      "STR argument ?" + source_name + " is not bound earlier");
            auto target_it = var_ids.find(target_name);
            if (target_it != var_ids.end() && body_bound.count(target_it->second))
                throw QueryParseError(bind_line,
                                      "BIND target ?" + target_name + " is not fresh");
            std::uint32_t target = var_id(target_name);
            body_bound.insert(target);
            q.binds.push_back({source_it->second, target});
            continue;
        }
        Atom atom{parse_term(), parse_term(), parse_term()};
        for (std::size_t pos = 0; pos < 3; ++pos)
            if (atom.at(pos).is_var) body_bound.insert(atom.at(pos).value);
        q.patterns.push_back(atom);
    }
    tok = lexer.next();
    if (tok.kind != QueryToken::End) throw QueryParseError(tok.line, "trailing content after '}'");

    std::vector<bool> in_pattern(q.var_names.size(), false);
    for (const Atom& a : q.patterns)
        for (std::size_t pos = 0; pos < 3; ++pos)
            if (a.at(pos).is_var) in_pattern[a.at(pos).value] = true;
    std::vector<bool> bound = in_pattern;
    for (const BindStr& b : q.binds) {
        if (in_pattern[b.target_var])
            throw QueryParseError(1, "BIND target ?" + q.var_names[b.target_var] +
                                         " is not fresh");
        bound[b.target_var] = true;
    }
    for (std::uint32_t v : q.projection)
        if (!bound[v])
            throw QueryParseError(1, "projected variable ?" + q.var_names[v] +
                                         " does not occur in the pattern");
    return q;
}

SelectQuery normalize_query(const RepresentativeMap& rho, const SelectQuery& q) {
    SelectQuery out = q;
    for (Atom& a : out.patterns)
        for (std::size_t pos = 0; pos < 3; ++pos) {
            AtomTerm& t = a.at(pos);
            if (!t.is_var) t.value = safe_resolve(rho, t.value);
        }
    return out;
}

SolutionTable match_bgp(const FactStore& store, const SelectQuery& q) {
    SolutionTable table;
    table.expanded.assign(q.var_names.size(), false);
    AnnotatedQuery annotated;
    for (const Atom& a : q.patterns) annotated.push_back({a, Strictness::Inclusive});
    Bindings empty(q.var_names.size(), kNoResource);
    evaluate(store, annotated, kUnbounded, empty,
             [&](const Bindings& tau) { table.rows.push_back(tau); });
    return table;
}

void expand_variable(SolutionTable& table, std::uint32_t v, const RepresentativeMap& rho) {
    if (table.expanded[v]) throw std::logic_error("variable expanded twice");
    std::vector<Bindings> rows;
    for (const Bindings& row : table.rows) {
        if (row[v] == kNoResource) {
            rows.push_back(row);
            continue;
        }
        for (ResourceId member : clique_of(rho, row[v])) {
            rows.push_back(row);
            rows.back()[v] = member;
        }
    }
    table.rows = std::move(rows);
    table.expanded[v] = true;
}

void apply_bind(SolutionTable& table, const BindStr& bind, TermDictionary& dict,
                const QueryOptions& opt) {
    if (!table.expanded[bind.source_var])
        throw std::logic_error("STR argument must be expanded before the BIND");
    for (Bindings& row : table.rows) {
        ResourceId source = row[bind.source_var];
        if (source == kNoResource) continue;
        row[bind.target_var] = dict.intern_literal(str_value(dict, source, opt.base_iri));
    }
    table.expanded[bind.target_var] = true;
}

AnswerMultiset project(const SolutionTable& table, const std::vector<std::uint32_t>& projection,
                       const RepresentativeMap& rho) {
    AnswerMultiset answers;
    std::vector<bool> projected(table.expanded.size(), false);
    for (std::uint32_t v : projection) projected[v] = true;

    for (const Bindings& row : table.rows) {
        std::uint64_t factor = 1;
        for (std::size_t v = 0; v < table.expanded.size(); ++v) {
            if (projected[v] || table.expanded[v] || row[v] == kNoResource) continue;
            factor *= clique_size_of(rho, row[v]);
        }

        std::vector<ResourceId> tuple(projection.size(), kNoResource);
        auto emit = [&](auto&& self, std::size_t i) -> void {
            if (i == projection.size()) {
                answers[tuple] += factor;
                return;
            }
            std::uint32_t v = projection[i];
            if (table.expanded[v] || row[v] == kNoResource) {
                tuple[i] = row[v];
                self(self, i + 1);
                return;
            }
            for (ResourceId member : clique_of(rho, row[v])) {
                tuple[i] = member;
                self(self, i + 1);
            }
        };
        emit(emit, 0);
    }
    return answers;
}

AnswerMultiset answer(const FactStore& store, const RepresentativeMap& rho, const SelectQuery& q,
                      TermDictionary& dict, const QueryOptions& opt) {
    SelectQuery normalized = normalize_query(rho, q);
    SolutionTable table = match_bgp(store, normalized);
    for (const BindStr& bind : q.binds) {
        if (!table.expanded[bind.source_var]) expand_variable(table, bind.source_var, rho);
        apply_bind(table, bind, dict, opt);
    }
    return project(table, q.projection, rho);
}

std::string str_value(const TermDictionary& dict, ResourceId r, const std::string& base_iri) {
    const Term& term = dict.lookup(r);
    if (term.kind == TermKind::Literal) return term.text;
    if (!base_iri.empty() && term.text.rfind(base_iri, 0) == 0)
        return term.text.substr(base_iri.size());
    return term.text;
}

std::string render_tsv(const AnswerMultiset& answers, const SelectQuery& q,
                       const TermDictionary& dict) {
    std::string out;
    for (std::size_t i = 0; i < q.projection.size(); ++i) {
        if (i > 0) out += '\t';
        out += "?" + q.var_names[q.projection[i]];
    }
    out += '\n';
    for (const auto& [tuple, count] : answers) {
        std::string line;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i > 0) line += '\t';
            if (tuple[i] == kNoResource) continue;
            const Term& term = dict.lookup(tuple[i]);
            if (term.kind == TermKind::Iri)
                line += "<" + term.text + ">";
            else
                line += "\"" + escape_literal(term.text) + "\"";
        }
        line += '\n';
        for (std::uint64_t i = 0; i < count; ++i) out += line;
    }
    return out;
}

}  // namespace eqmat
