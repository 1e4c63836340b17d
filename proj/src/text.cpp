#include "csn/text.hpp"

#include <cctype>

namespace csn {

NormalizedText normalize_text(std::string_view raw) {
    NormalizedText out;
    out.text.reserve(raw.size());
    out.offsets.reserve(raw.size());

    std::size_t i = 0;
    const std::size_t n = raw.size();
    auto is_ws = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };

    while (i < n) {
        if (is_ws(raw[i])) {
            std::size_t run_start = i;
            while (i < n && is_ws(raw[i])) ++i;
            if (out.text.empty() || i == n) continue;  // trim ends
            out.text.push_back(' ');
            out.offsets.push_back(run_start);
        } else {
            out.text.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(raw[i]))));
            out.offsets.push_back(i);
            ++i;
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : normalized) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

}  // namespace csn
