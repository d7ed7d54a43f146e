#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "prefixopt/errors.hpp"
#include "prefixopt/tokenizer.hpp"

namespace prefixopt {

// What the objective measures when it scores a matched cell.
//
//   value_only    — token length of the raw cell value (default).
//   full_fragment — token length of the rendered fragment `"<field>": "<value>", `
//                   i.e. the bytes the cache actually stores, label included.
//
// All scoring paths (hit/phc, hitcount, column statistics) use the same
// convention so that rankings and reported scores stay comparable.
enum class SegmentScoring { value_only, full_fragment };

inline SegmentScoring scoring_by_name(std::string_view name) {
  if (name == "value") return SegmentScoring::value_only;
  if (name == "fragment") return SegmentScoring::full_fragment;
  throw schema_error("unknown scoring mode: " + std::string(name) +
                     " (expected 'value' or 'fragment')");
}

inline std::string_view scoring_name(SegmentScoring s) {
  return s == SegmentScoring::value_only ? "value" : "fragment";
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char hex[] = "0123456789abcdef";
          out += "\\u00";
          out += hex[(c >> 4) & 0xf];
          out += hex[c & 0xf];
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Canonical rendered fragment for one (field, value) cell. Interior fragments
// of the prompt body are exactly this text minus the trailing separator on the
// last field.
inline std::string fragment_text(std::string_view field, std::string_view value) {
  std::string out = "\"";
  out += json_escape(field);
  out += "\": \"";
  out += json_escape(value);
  out += "\", ";
  return out;
}

// Token length of one cell segment under the active convention.
inline std::uint64_t segment_len(std::string_view field, std::string_view value,
                                 const Tokenizer& tok, SegmentScoring scoring) {
  if (scoring == SegmentScoring::value_only) return tok.count(value);
  return tok.count(fragment_text(field, value));
}

// One rendered cell: the canonical fragment plus its scoring length.
struct RenderedSegment {
  std::string field;
  std::string value;
  std::string fragment;
  std::uint64_t token_len = 0;
};

inline RenderedSegment render_segment(std::string_view field, std::string_view value,
                                      const Tokenizer& tok,
                                      SegmentScoring scoring = SegmentScoring::value_only) {
  RenderedSegment seg;
  seg.field = std::string(field);
  seg.value = std::string(value);
  seg.fragment = fragment_text(field, value);
  seg.token_len = segment_len(field, value, tok, scoring);
  return seg;
}

}  // namespace prefixopt
