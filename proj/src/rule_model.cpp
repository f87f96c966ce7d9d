#include "eqmat/rule_model.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "eqmat/representative_map.hpp"
#include "eqmat/term_dictionary.hpp"

namespace eqmat {

namespace {

struct Token {
    enum Kind { LBracket, RBracket, Comma, Arrow, Dot, Variable, Iri, Literal, End };
    Kind kind;
    std::string text;
    std::size_t line;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_space();
        if (pos_ >= text_.size()) return {Token::End, "", line_};
        char c = text_[pos_];
        switch (c) {
            case '[': ++pos_; return {Token::LBracket, "[", line_};
            case ']': ++pos_; return {Token::RBracket, "]", line_};
            case ',': ++pos_; return {Token::Comma, ",", line_};
            case '.': ++pos_; return {Token::Dot, ".", line_};
            case ':':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                    pos_ += 2;
                    return {Token::Arrow, ":-", line_};
                }
                throw RuleParseError(line_, "expected ':-'");
            case '?': return lex_variable();
            case '<': return lex_iri();
            case '"': return lex_literal();
            default:
                throw RuleParseError(line_, std::string("unexpected character '") + c + "'");
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

    Token lex_variable() {
        std::size_t start = ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) throw RuleParseError(line_, "empty variable name after '?'");
        return {Token::Variable, text_.substr(start, pos_ - start), line_};
    }

    Token lex_iri() {
        std::size_t start = ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '>' && text_[pos_] != '\n') ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != '>')
            throw RuleParseError(line_, "unterminated IRI");
        std::string iri = text_.substr(start, pos_ - start);
        ++pos_;
        if (iri.empty()) throw RuleParseError(line_, "empty IRI");
        return {Token::Iri, iri, line_};
    }

    Token lex_literal() {
        ++pos_;
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '"') {
                ++pos_;
                return {Token::Literal, out, line_};
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
                        throw RuleParseError(line_, std::string("unsupported escape '\\") +
                                                        text_[pos_] + "'");
                }
                ++pos_;
                continue;
            }
            out.push_back(c);
            ++pos_;
        }
        throw RuleParseError(line_, "unterminated literal");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

struct StatementContext {
    std::map<std::string, std::uint32_t> var_ids;
    std::vector<std::string> var_names;

    std::uint32_t var(const std::string& name) {
        auto it = var_ids.find(name);
        if (it != var_ids.end()) return it->second;
        auto id = static_cast<std::uint32_t>(var_names.size());
        var_ids.emplace(name, id);
        var_names.push_back(name);
        return id;
    }
};

bool rule_in(const std::vector<Rule>& rules, const Rule& r) {
    return std::find(rules.begin(), rules.end(), r) != rules.end();
}

void collect_vars(const Atom& a, std::vector<bool>& seen) {
    for (std::size_t pos = 0; pos < 3; ++pos) {
        const AtomTerm& t = a.at(pos);
        if (t.is_var) {
            if (t.value >= seen.size()) seen.resize(t.value + 1, false);
            seen[t.value] = true;
        }
    }
}

}  // namespace

ParsedRules parse_rules(const std::string& text, TermDictionary& dict) {
    Lexer lexer(text);
    ParsedRules out;
    Token tok = lexer.next();

    auto expect = [&](Token::Kind kind, const char* what) {
        if (tok.kind != kind) throw RuleParseError(tok.line, std::string("expected ") + what);
        Token t = tok;
        tok = lexer.next();
        return t;
    };

    auto parse_term = [&](StatementContext& ctx) -> AtomTerm {
        switch (tok.kind) {
            case Token::Variable: {
                AtomTerm t = AtomTerm::var(ctx.var(tok.text));
                tok = lexer.next();
                return t;
            }
            case Token::Iri: {
                AtomTerm t = AtomTerm::constant(dict.intern_iri(tok.text));
                tok = lexer.next();
                return t;
            }
            case Token::Literal: {
                AtomTerm t = AtomTerm::constant(dict.intern_literal(tok.text));
                tok = lexer.next();
                return t;
            }
            default:
                throw RuleParseError(tok.line, "expected '?NAME', '<IRI>', or '\"STRING\"'");
        }
    };

    auto parse_atom = [&](StatementContext& ctx) -> Atom {
        expect(Token::LBracket, "'['");
        Atom a;
        a.s = parse_term(ctx);
        expect(Token::Comma, "','");
        a.p = parse_term(ctx);
        expect(Token::Comma, "','");
        a.o = parse_term(ctx);
        expect(Token::RBracket, "']'");
        return a;
    };

    while (tok.kind != Token::End) {
        std::size_t statement_line = tok.line;
        StatementContext ctx;
        Atom head = parse_atom(ctx);
        if (tok.kind == Token::Dot) {
            tok = lexer.next();
            if (!ctx.var_names.empty())
                throw RuleParseError(statement_line, "variable ?" + ctx.var_names.front() +
                                                         " not allowed in a fact");
            out.facts.push_back(Triple{head.s.value, head.p.value, head.o.value});
            continue;
        }
        expect(Token::Arrow, "'.' or ':-'");
        Rule rule;
        rule.head = head;
        rule.body.push_back(parse_atom(ctx));
        while (tok.kind == Token::Comma) {
            tok = lexer.next();
            rule.body.push_back(parse_atom(ctx));
        }
        expect(Token::Dot, "'.'");
        rule.var_count = static_cast<std::uint32_t>(ctx.var_names.size());
        rule.var_names = std::move(ctx.var_names);

        std::vector<bool> head_vars, body_vars;
        collect_vars(rule.head, head_vars);
        for (const Atom& a : rule.body) collect_vars(a, body_vars);
        for (std::size_t v = 0; v < head_vars.size(); ++v) {
            if (head_vars[v] && (v >= body_vars.size() || !body_vars[v]))
                throw RuleParseError(statement_line,
                                     "unsafe rule: head variable ?" + rule.var_names[v] +
                                         " does not occur in the body");
        }
        for (const Atom& a : rule.body) {
            if (a.p.is_var)
                throw RuleParseError(statement_line,
                                     "unsupported rule: body predicates must be constants");
            if (a.p.value == kSameAs || a.p.value == kDifferentFrom)
                throw RuleParseError(
                    statement_line,
                    "unsupported rule: equality predicates are handled natively and cannot "
                    "appear in a rule body");
        }
        if (!rule_in(out.program.rules, rule)) out.program.rules.push_back(std::move(rule));
    }
    return out;
}

Program eq_axiomatisation() {
    const AtomTerm x1 = AtomTerm::var(0);
    const AtomTerm x2 = AtomTerm::var(1);
    const AtomTerm x3 = AtomTerm::var(2);
    const AtomTerm y = AtomTerm::var(3);
    const AtomTerm eq = AtomTerm::constant(kSameAs);
    const Atom any{x1, x2, x3};

    auto reflexivity = [&](const AtomTerm& v) {
        Rule r;
        r.head = Atom{v, eq, v};
        r.body = {any};
        r.var_count = 3;
        r.var_names = {"x1", "x2", "x3"};
        return r;
    };
    auto replacement = [&](std::size_t pos) {
        Rule r;
        r.head = any;
        r.head.at(pos) = y;
        r.body = {any, Atom{any.at(pos), eq, y}};
        r.var_count = 4;
        r.var_names = {"x1", "x2", "x3", "y"};
        return r;
    };

    Program p;
    p.rules = {reflexivity(x1), reflexivity(x2), reflexivity(x3),
               replacement(0),  replacement(1),  replacement(2)};
    p.contradiction_rule = true;
    return p;
}

Program with_equality_axioms(const Program& p) {
    Program out = p;
    for (const Rule& r : eq_axiomatisation().rules)
        if (!rule_in(out.rules, r)) out.rules.push_back(r);
    out.contradiction_rule = true;
    return out;
}

Rule normalize_rule(const RepresentativeMap& rho, const Rule& r) {
    Rule out = r;
    auto fix = [&](AtomTerm& t) {
        if (!t.is_var) t.value = rho.resolve(t.value);
    };
    for (std::size_t pos = 0; pos < 3; ++pos) fix(out.head.at(pos));
    for (Atom& a : out.body)
        for (std::size_t pos = 0; pos < 3; ++pos) fix(a.at(pos));
    return out;
}

Program normalize_program(const RepresentativeMap& rho, const Program& p) {
    Program out;
    out.contradiction_rule = p.contradiction_rule;
    for (const Rule& r : p.rules) {
        Rule n = normalize_rule(rho, r);
        if (!rule_in(out.rules, n)) out.rules.push_back(std::move(n));
    }
    return out;
}

std::string rule_to_string(const Rule& r, const TermDictionary& dict) {
    auto term = [&](const AtomTerm& t) -> std::string {
        if (t.is_var) return "?" + std::to_string(t.value);
        const Term& res = dict.lookup(t.value);
        if (res.kind == TermKind::Iri) return "<" + res.text + ">";
        return "\"" + res.text + "\"";
    };
    auto atom = [&](const Atom& a) {
        return "[" + term(a.s) + "," + term(a.p) + "," + term(a.o) + "]";
    };
    std::string out = atom(r.head);
    if (!r.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i > 0) out += ", ";
            out += atom(r.body[i]);
        }
    }
    out += " .";
    return out;
}

AnnotatedQuery pivot_query(const Rule& r, std::size_t body_pos) {
    AnnotatedQuery q;
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i == body_pos) continue;
        q.push_back({r.body[i], i < body_pos ? Strictness::Strict : Strictness::Inclusive});
    }
    return q;
}

AnnotatedQuery inclusive_body(const Rule& r) {
    AnnotatedQuery q;
    for (const Atom& a : r.body) q.push_back({a, Strictness::Inclusive});
    return q;
}

void RuleIndex::rebuild(const Program& p) {
    buckets_.clear();
    for (const Rule& r : p.rules) {
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            const Atom& a = r.body[i];
            Triple key{};
            key.s = a.s.is_var ? kNoResource : a.s.value;
            key.p = a.p.is_var ? kNoResource : a.p.value;
            key.o = a.o.is_var ? kNoResource : a.o.value;
            buckets_[key].push_back({&r, static_cast<std::uint32_t>(i)});
        }
    }
}

void RuleIndex::rules_for(const Triple& t,
                          const std::function<void(const Rule&, std::size_t,
                                                   const std::vector<ResourceId>&)>& visit) const {
    if (buckets_.empty()) return;
    std::vector<ResourceId> sigma;
    ResourceId fields[3] = {t.s, t.p, t.o};
    for (unsigned mask = 0; mask < 8; ++mask) {
        Triple key{mask & 1 ? fields[0] : kNoResource, mask & 2 ? fields[1] : kNoResource,
                   mask & 4 ? fields[2] : kNoResource};
        auto it = buckets_.find(key);
        if (it == buckets_.end()) continue;
        for (const Entry& e : it->second) {
            const Atom& a = e.rule->body[e.body_pos];
            sigma.assign(e.rule->var_count, kNoResource);
            bool ok = true;
            for (std::size_t pos = 0; pos < 3 && ok; ++pos) {
                const AtomTerm& term = a.at(pos);
                if (term.is_var) {
                    ResourceId& slot = sigma[term.value];
                    if (slot == kNoResource)
                        slot = fields[pos];
                    else if (slot != fields[pos])
                        ok = false;
                } else if (term.value != fields[pos]) {
                    ok = false;
                }
            }
            if (ok) visit(*e.rule, e.body_pos, sigma);
        }
    }
}

}  // namespace eqmat
