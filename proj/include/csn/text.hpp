#ifndef CSN_TEXT_HPP
#define CSN_TEXT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace csn {

// Canonical text normalization shared by the verbatim and partial pipelines:
// ASCII lowercase, every maximal whitespace run collapsed to a single space,
// leading/trailing whitespace removed. offsets[i] is the raw index that
// produced normalized character i (for a collapsed run, the start of the run).
struct NormalizedText {
    std::string text;
    std::vector<std::size_t> offsets;
};

NormalizedText normalize_text(std::string_view raw);

// Splits normalized text on non-alphanumeric characters, dropping empties.
std::vector<std::string> tokenize(std::string_view normalized);

}  // namespace csn

#endif
