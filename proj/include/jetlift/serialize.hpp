#pragma once

#include "jetlift/parser.hpp"
#include "jetlift/shlie.hpp"

#include <string>

namespace jetlift {

// JSON file formats. Every document is an object with "version" (1) and
// "type" ("lf", "ldo", "hform", "oform", "dend", "tower") plus the shape
// fields; scalar payloads are canonical expression strings, so the text
// and JSON faces round-trip through the same grammar. Keys are emitted
// in a fixed order and the dump is byte-deterministic.
std::string to_json_text(const LocalFunction& f);
std::string to_json_text(const Ldo& a);
std::string to_json_text(const HorizontalForm& w);
std::string to_json_text(const OperatorForm& f);
std::string to_json_text(const DEndElement& f);
std::string to_json_text(const ShLieTower& t);

// Typed loads: the document's "type" must match.
LocalFunction lf_from_json(const std::string& text);
Ldo ldo_from_json(const std::string& text);
HorizontalForm hform_from_json(const std::string& text);
OperatorForm oform_from_json(const std::string& text);
DEndElement dend_from_json(const std::string& text);
ShLieTower tower_from_json(const std::string& text);

// The "type" field of a JSON document, or "" when the text is not a
// JSON object with one.
std::string json_doc_type(const std::string& text);

} // namespace jetlift
