#include "eqmat/ntriples.hpp"

#include <istream>
#include <ostream>

#include "eqmat/term_dictionary.hpp"

namespace eqmat {

namespace {

void skip_ws(const std::string& line, std::size_t& i) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
}

std::string parse_iri(const std::string& line, std::size_t& i, std::size_t lineno) {
    if (i >= line.size() || line[i] != '<') throw NTriplesError(lineno, "expected '<'");
    std::size_t end = line.find('>', i + 1);
    if (end == std::string::npos) throw NTriplesError(lineno, "unterminated IRI");
    std::string iri = line.substr(i + 1, end - i - 1);
    if (iri.empty()) throw NTriplesError(lineno, "empty IRI");
    i = end + 1;
    return iri;
}

std::string parse_literal(const std::string& line, std::size_t& i, std::size_t lineno) {
    ++i;  // opening quote
    std::string text;
    while (i < line.size()) {
        char c = line[i];
        if (c == '"') {
            ++i;
            return text;
        }
        if (c == '\\') {
            ++i;
            if (i >= line.size()) break;
            switch (line[i]) {
                case '\\': text.push_back('\\'); break;
                case '"': text.push_back('"'); break;
                case 'n': text.push_back('\n'); break;
                case 't': text.push_back('\t'); break;
                case 'r': text.push_back('\r'); break;
                default:
                    throw NTriplesError(lineno, std::string("unsupported escape '\\") + line[i] +
                                                    "'");
            }
            ++i;
            continue;
        }
        text.push_back(c);
        ++i;
    }
    throw NTriplesError(lineno, "unterminated literal");
}

void write_escaped_literal(std::ostream& out, const std::string& text) {
    out << '"';
    for (char c : text) {
        switch (c) {
            case '\\': out << "\\\\"; break;
            case '"': out << "\\\""; break;
            case '\n': out << "\\n"; break;
            case '\t': out << "\\t"; break;
            case '\r': out << "\\r"; break;
            default: out << c;
        }
    }
    out << '"';
}

}  // namespace

void parse_ntriples(std::istream& in, TermDictionary& dict, std::vector<Triple>& out) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t i = 0;
        skip_ws(line, i);
        if (i >= line.size() || line[i] == '#') continue;

        Triple t{};
        t.s = dict.intern_iri(parse_iri(line, i, lineno));
        skip_ws(line, i);
        t.p = dict.intern_iri(parse_iri(line, i, lineno));
        skip_ws(line, i);
        if (i >= line.size()) throw NTriplesError(lineno, "missing object");
        if (line[i] == '<') {
            t.o = dict.intern_iri(parse_iri(line, i, lineno));
        } else if (line[i] == '"') {
            t.o = dict.intern_literal(parse_literal(line, i, lineno));
        } else {
            throw NTriplesError(lineno, "expected IRI or literal object");
        }
        skip_ws(line, i);
        if (i >= line.size() || line[i] != '.') throw NTriplesError(lineno, "expected '.'");
        ++i;
        skip_ws(line, i);
        if (i < line.size() && line[i] != '#')
            throw NTriplesError(lineno, "trailing content after '.'");
        out.push_back(t);
    }
}

void write_ntriples_line(std::ostream& out, const TermDictionary& dict, const Triple& t) {
    const Term& s = dict.lookup(t.s);
    const Term& p = dict.lookup(t.p);
    const Term& o = dict.lookup(t.o);
    out << '<' << s.text << "> <" << p.text << "> ";
    if (o.kind == TermKind::Iri)
        out << '<' << o.text << '>';
    else
        write_escaped_literal(out, o.text);
    out << " .\n";
}

}  // namespace eqmat
