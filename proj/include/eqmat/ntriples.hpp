#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqmat/types.hpp"

namespace eqmat {

class TermDictionary;

// Parse and serialisation errors carry the 1-based line number of the
// offending input line.
class NTriplesError : public std::runtime_error {
  public:
    NTriplesError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

// Parses a stream of N-Triples lines, interning every term through `dict` and
// appending one triple per statement to `out` in input order. Supported
// subset: IRI subjects, IRI predicates, IRI or plain-literal objects, `#`
// comment lines, and blank lines. Literal escapes: \\ \" \n \t \r.
void parse_ntriples(std::istream& in, TermDictionary& dict, std::vector<Triple>& out);

// Serialises one triple as a single N-Triples statement followed by '\n'.
void write_ntriples_line(std::ostream& out, const TermDictionary& dict, const Triple& t);

}  // namespace eqmat
