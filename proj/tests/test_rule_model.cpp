#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eqmat/representative_map.hpp"
#include "eqmat/rule_model.hpp"
#include "eqmat/term_dictionary.hpp"

using namespace eqmat;

namespace {

constexpr const char* kPexRules =
    "[?x, <http://www.w3.org/2002/07/owl#sameAs>, <http://example.org/USA>] :- "
    "[<http://example.org/Obama>, <http://example.org/presidentOf>, ?x].\n"
    "[?x, <http://www.w3.org/2002/07/owl#sameAs>, <http://example.org/Obama>] :- "
    "[?x, <http://example.org/presidentOf>, <http://example.org/USA>].\n";

Rule expected_reflexivity(std::uint32_t pos) {
    Rule r;
    r.head = Atom{AtomTerm::var(pos), AtomTerm::constant(kSameAs), AtomTerm::var(pos)};
    r.body = {Atom{AtomTerm::var(0), AtomTerm::var(1), AtomTerm::var(2)}};
    r.var_count = 3;
    r.var_names = {"x1", "x2", "x3"};
    return r;
}

Rule expected_replacement(std::size_t pos) {
    Rule r;
    Atom any{AtomTerm::var(0), AtomTerm::var(1), AtomTerm::var(2)};
    r.head = any;
    r.head.at(pos) = AtomTerm::var(3);
    r.body = {any, Atom{any.at(pos), AtomTerm::constant(kSameAs), AtomTerm::var(3)}};
    r.var_count = 4;
    r.var_names = {"x1", "x2", "x3", "y"};
    return r;
}

}  // namespace

TEST_CASE("rule text parses to its structural form") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(kPexRules, dict);
    REQUIRE(parsed.program.rules.size() == 2);
    CHECK(parsed.facts.empty());
    CHECK_FALSE(parsed.program.contradiction_rule);

    ResourceId obama = dict.intern_iri("http://example.org/Obama");
    ResourceId presOf = dict.intern_iri("http://example.org/presidentOf");
    ResourceId usa = dict.intern_iri("http://example.org/USA");

    Rule r;
    r.head = Atom{AtomTerm::var(0), AtomTerm::constant(kSameAs), AtomTerm::constant(usa)};
    r.body = {Atom{AtomTerm::constant(obama), AtomTerm::constant(presOf), AtomTerm::var(0)}};
    Rule s;
    s.head = Atom{AtomTerm::var(0), AtomTerm::constant(kSameAs), AtomTerm::constant(obama)};
    s.body = {Atom{AtomTerm::var(0), AtomTerm::constant(presOf), AtomTerm::constant(usa)}};
    CHECK(parsed.program.rules[0] == r);
    CHECK(parsed.program.rules[1] == s);
    CHECK(parsed.program.rules[0].var_count == 1);
    CHECK(parsed.program.rules[0].var_names == std::vector<std::string>{"x"});
}

TEST_CASE("variables number in first-occurrence order per statement") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "[?b, <http://example.org/p>, ?a] :- [?a, <http://example.org/p>, ?b].", dict);
    REQUIRE(parsed.program.rules.size() == 1);
    const Rule& r = parsed.program.rules[0];
    CHECK(r.var_names == std::vector<std::string>{"b", "a"});
    CHECK(r.head.s == AtomTerm::var(0));
    CHECK(r.head.o == AtomTerm::var(1));
    CHECK(r.body[0].s == AtomTerm::var(1));
    CHECK(r.body[0].o == AtomTerm::var(0));
}

TEST_CASE("ground statements become facts") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "# facts first\n"
        "[<http://example.org/a>, <http://example.org/p>, <http://example.org/b>].\n"
        "[<http://example.org/a>, <http://example.org/q>, \"text\"].\n"
        "[?x, <http://example.org/r>, ?x] :- [?x, <http://example.org/p>, ?x].\n",
        dict);
    CHECK(parsed.program.rules.size() == 1);
    REQUIRE(parsed.facts.size() == 2);
    CHECK(parsed.facts[0] == Triple{3, 4, 5});
    CHECK(parsed.facts[1].p == dict.intern_iri("http://example.org/q"));
    CHECK(dict.lookup(parsed.facts[1].o).kind == TermKind::Literal);
}

TEST_CASE("exact duplicate rules collapse") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "[?x, <http://example.org/p>, ?y] :- [?y, <http://example.org/q>, ?x].\n"
        "[?a, <http://example.org/p>, ?b] :- [?b, <http://example.org/q>, ?a].\n",
        dict);
    CHECK(parsed.program.rules.size() == 1);
}

TEST_CASE("rejected statements name their line") {
    TermDictionary dict;
    auto expect_error = [&](const std::string& text, std::size_t line,
                            const std::string& needle) {
        try {
            parse_rules(text, dict);
            FAIL("expected a parse error for: ", text);
        } catch (const RuleParseError& e) {
            CHECK(e.line() == line);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("[?x, <http://example.org/p>, ?y] :- [?x, <http://example.org/q>, ?x].", 1,
                 "unsafe rule");
    expect_error("[<http://example.org/a>, <http://example.org/p>, ?x].", 1,
                 "not allowed in a fact");
    expect_error("# comment\n[?x, ?p, ?y] :- [?x, ?p, ?y].", 2,
                 "body predicates must be constants");
    expect_error(
        "[?x, <http://example.org/p>, ?y] :- "
        "[?x, <http://www.w3.org/2002/07/owl#sameAs>, ?y].",
        1, "handled natively");
    expect_error(
        "[?x, <http://example.org/p>, ?y] :- "
        "[?x, <http://www.w3.org/2002/07/owl#differentFrom>, ?y].",
        1, "handled natively");
    expect_error("[?x, <http://example.org/p>]", 1, "expected ','");
    expect_error("[?x, <http://example.org/p>, ?x] :- [?x, <http://example.org/q>, ?x]", 1,
                 "expected '.'");
    expect_error("[<http://example.org/a>, <http://example.org/p>, <unterminated].", 1,
                 "unterminated IRI");
}

TEST_CASE("the equality axiomatisation has the six congruence rules") {
    Program p = eq_axiomatisation();
    CHECK(p.contradiction_rule);
    REQUIRE(p.rules.size() == 6);
    CHECK(p.rules[0] == expected_reflexivity(0));
    CHECK(p.rules[1] == expected_reflexivity(1));
    CHECK(p.rules[2] == expected_reflexivity(2));
    CHECK(p.rules[3] == expected_replacement(0));
    CHECK(p.rules[4] == expected_replacement(1));
    CHECK(p.rules[5] == expected_replacement(2));
    // Symmetry and transitivity are consequences, not members.
    for (const Rule& r : p.rules) CHECK(r.body.size() <= 2);
}

TEST_CASE("extending a program with the axioms deduplicates") {
    TermDictionary dict;
    Program base = parse_rules(kPexRules, dict).program;
    Program extended = with_equality_axioms(base);
    CHECK(extended.contradiction_rule);
    CHECK(extended.rules.size() == 8);
    CHECK(extended.rules[0] == base.rules[0]);
    CHECK(extended.rules[1] == base.rules[1]);
    CHECK(with_equality_axioms(extended).rules.size() == 8);
}

TEST_CASE("normalization maps rule constants to representatives") {
    TermDictionary dict;
    Program base = parse_rules(kPexRules, dict).program;
    ResourceId us = dict.intern_iri("http://example.org/US");
    ResourceId usa = dict.intern_iri("http://example.org/USA");
    ResourceId rep = std::min(us, usa);

    RepresentativeMap rho(dict.size());
    REQUIRE(rho.merge_into(std::max(us, usa), rep));
    Rule n = normalize_rule(rho, base.rules[0]);
    CHECK(n.head.o == AtomTerm::constant(rep));
    CHECK(n.head.s == AtomTerm::var(0));  // variables untouched
    CHECK(n.body == base.rules[0].body);  // no merged constant in the body
}

TEST_CASE("normalizing a program collapses convergent rules") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "[?x, <http://example.org/p>, <http://example.org/a>] :- "
        "[?x, <http://example.org/q>, ?y].\n"
        "[?x, <http://example.org/p>, <http://example.org/b>] :- "
        "[?x, <http://example.org/q>, ?y].\n",
        dict);
    REQUIRE(parsed.program.rules.size() == 2);
    ResourceId a = dict.intern_iri("http://example.org/a");
    ResourceId b = dict.intern_iri("http://example.org/b");

    RepresentativeMap rho(dict.size());
    REQUIRE(rho.merge_into(std::max(a, b), std::min(a, b)));
    Program n = normalize_program(rho, parsed.program);
    CHECK(n.rules.size() == 1);
    CHECK(n.contradiction_rule == parsed.program.contradiction_rule);
}

TEST_CASE("structurally equal rules render identically") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "[?x, <http://example.org/p>, ?y] :- [?y, <http://example.org/q>, ?x].\n", dict);
    ParsedRules renamed = parse_rules(
        "[?left, <http://example.org/p>, ?right] :- [?right, <http://example.org/q>, ?left].\n",
        dict);
    CHECK(rule_to_string(parsed.program.rules[0], dict) ==
          rule_to_string(renamed.program.rules[0], dict));
    CHECK(rule_to_string(parsed.program.rules[0], dict) ==
          "[?0,<http://example.org/p>,?1] :- [?1,<http://example.org/q>,?0] .");
}

TEST_CASE("pivot windows keep atoms before the pivot strict") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "[?x, <http://example.org/r>, ?z] :- [?x, <http://example.org/p>, ?y], "
        "[?y, <http://example.org/q>, ?z], [?z, <http://example.org/s>, ?x].\n",
        dict);
    const Rule& r = parsed.program.rules[0];

    AnnotatedQuery q0 = pivot_query(r, 0);
    REQUIRE(q0.size() == 2);
    CHECK(q0[0].atom == r.body[1]);
    CHECK(q0[0].strictness == Strictness::Inclusive);
    CHECK(q0[1].atom == r.body[2]);
    CHECK(q0[1].strictness == Strictness::Inclusive);

    AnnotatedQuery q1 = pivot_query(r, 1);
    REQUIRE(q1.size() == 2);
    CHECK(q1[0].atom == r.body[0]);
    CHECK(q1[0].strictness == Strictness::Strict);
    CHECK(q1[1].atom == r.body[2]);
    CHECK(q1[1].strictness == Strictness::Inclusive);

    AnnotatedQuery q2 = pivot_query(r, 2);
    REQUIRE(q2.size() == 2);
    CHECK(q2[0].strictness == Strictness::Strict);
    CHECK(q2[1].strictness == Strictness::Strict);

    AnnotatedQuery body = inclusive_body(r);
    REQUIRE(body.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(body[i].atom == r.body[i]);
        CHECK(body[i].strictness == Strictness::Inclusive);
    }
}

TEST_CASE("the rule index finds what brute force finds") {
    TermDictionary dict;
    ParsedRules parsed = parse_rules(
        "[?x, <http://example.org/r>, ?y] :- [?x, <http://example.org/p>, ?y].\n"
        "[?x, <http://example.org/r>, ?x] :- [?x, <http://example.org/p>, ?x].\n"
        "[?y, <http://example.org/s>, ?x] :- [?x, <http://example.org/p>, ?y], "
        "[?y, <http://example.org/q>, ?x].\n"
        "[<http://example.org/a>, <http://example.org/s>, ?y] :- "
        "[<http://example.org/a>, <http://example.org/q>, ?y].\n",
        dict);
    const Program& prog = parsed.program;
    ResourceId p = dict.intern_iri("http://example.org/p");
    ResourceId q = dict.intern_iri("http://example.org/q");
    ResourceId a = dict.intern_iri("http://example.org/a");
    RuleIndex index(prog);

    using Match = std::tuple<std::size_t, std::size_t, std::vector<ResourceId>>;
    auto brute_force = [&](const Triple& t) {
        std::set<Match> out;
        for (std::size_t ri = 0; ri < prog.rules.size(); ++ri) {
            const Rule& r = prog.rules[ri];
            for (std::size_t bi = 0; bi < r.body.size(); ++bi) {
                std::vector<ResourceId> sigma(r.var_count, kNoResource);
                bool ok = true;
                ResourceId fields[3] = {t.s, t.p, t.o};
                for (std::size_t pos = 0; pos < 3 && ok; ++pos) {
                    const AtomTerm& term = r.body[bi].at(pos);
                    if (term.is_var) {
                        if (sigma[term.value] == kNoResource)
                            sigma[term.value] = fields[pos];
                        else if (sigma[term.value] != fields[pos])
                            ok = false;
                    } else if (term.value != fields[pos]) {
                        ok = false;
                    }
                }
                if (ok) out.insert({ri, bi, sigma});
            }
        }
        return out;
    };
    auto indexed = [&](const Triple& t) {
        std::set<Match> out;
        index.rules_for(t, [&](const Rule& r, std::size_t bi,
                               const std::vector<ResourceId>& sigma) {
            std::size_t ri = static_cast<std::size_t>(&r - prog.rules.data());
            CHECK_FALSE(out.count({ri, bi, sigma}));  // no duplicate visits
            out.insert({ri, bi, sigma});
        });
        return out;
    };

    std::vector<Triple> probes{{a, p, a},       {a, p, 9},  {9, q, a}, {a, q, 9},
                               {9, 9, 9},       {a, a, a},  {p, q, a}, {a, kSameAs, a},
                               {kSameAs, p, q}, {10, p, 10}};
    for (const Triple& t : probes) CHECK(indexed(t) == brute_force(t));

    CHECK(brute_force({a, p, 9}).size() == 2);   // sanity: probes do hit rules
    CHECK(brute_force({10, p, 10}).size() == 3);
    CHECK(brute_force({a, q, 9}).size() == 2);
}
