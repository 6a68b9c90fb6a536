#pragma once

#include <string>
#include <string_view>

#include "brickgen/rdf.hpp"

namespace brickgen::rdf {

/// Deterministic Turtle rendering.
///
/// Prefix directives come first (sorted by prefix name), then one block per
/// subject in IRI order. rdf:type is written as `a` and listed first; other
/// predicates follow in IRI order, objects in term order. IRIs under a bound
/// prefix are written as prefixed names when the local part is a plain name,
/// otherwise as <absolute>.
std::string serialize_turtle(const Graph& graph);

/// Parses the Turtle subset emitted by serialize_turtle: @prefix / PREFIX
/// directives, prefixed names, <absolute IRIs>, `a`, `;` and `,` lists, short
/// string literals with optional ^^datatype, and # comments.
///
/// Errors throw ParseError with the 1-based line and column. `source` is used
/// only to label the error.
Graph parse_turtle(std::string_view text, std::string source = {});

Graph read_turtle_file(const std::string& path);
void write_turtle_file(const Graph& graph, const std::string& path);

/// Renders one term the way serialize_turtle does.
std::string render_term(const Graph& graph, const Term& term);

}  // namespace brickgen::rdf
