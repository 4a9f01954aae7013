#pragma once

#include "optcert/piecewise.hpp"

#include <string>

namespace optcert {

// Parse a problem document. The format is strict: unknown keys anywhere in
// the document are rejected, as are wrong shapes or non-numeric entries.
// Throws ParseError with a path-like context ("objectives[0].poly.terms[2]").
Problem parse_problem(const std::string& json_text);

// Read and parse a problem file; file-system failures also raise ParseError.
Problem load_problem(const std::string& path);

}  // namespace optcert
