#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "epochscope/text.hpp"

namespace epochscope {

enum class ItemKind { Form, Delimiter };

// One slot on the positional backbone. Positions are implicit: item k of a
// built base sits at position k+1.
struct Item {
    std::string surface;
    ItemKind kind = ItemKind::Form;
};

// Tokenization policy. Whitespace is fixed (ASCII blanks); punctuation
// delimiters and apostrophe characters are configurable. Punctuation marks
// become one item each, whitespace runs collapse into a single item, and an
// apostrophe closes the current form while staying attached to it
// ("l'Europe" -> forms "l'", "Europe").
struct TokenPolicy {
    std::u32string punctuation = U".,;:!?()\"«»—";
    std::u32string apostrophes = U"'";

    bool is_whitespace(char32_t cp) const {
        return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
               cp == U'\v' || cp == U'\f';
    }

    bool is_punctuation(char32_t cp) const {
        return punctuation.find(cp) != std::u32string::npos;
    }

    bool is_apostrophe(char32_t cp) const {
        return apostrophes.find(cp) != std::u32string::npos;
    }

    // Stable digest, echoed in report headers and used as a cache key.
    std::string digest() const {
        Fnv1a64 h;
        h.update("punctuation");
        for (const char32_t cp : punctuation) h.update(static_cast<std::uint64_t>(cp));
        h.update("apostrophes");
        for (const char32_t cp : apostrophes) h.update(static_cast<std::uint64_t>(cp));
        return h.hex();
    }
};

// Splits `text` into form and delimiter items. Joining the surfaces back in
// order reproduces the input byte for byte; forms are case-sensitive.
inline std::vector<Item> tokenize(std::string_view text, const TokenPolicy& policy = {}) {
    std::vector<Item> items;
    std::size_t form_start = 0;
    std::size_t ws_start = 0;
    bool in_form = false;
    bool in_ws = false;

    auto flush_form = [&](std::size_t end) {
        if (in_form) {
            items.push_back({std::string(text.substr(form_start, end - form_start)),
                             ItemKind::Form});
            in_form = false;
        }
    };
    auto flush_ws = [&](std::size_t end) {
        if (in_ws) {
            items.push_back({std::string(text.substr(ws_start, end - ws_start)),
                             ItemKind::Delimiter});
            in_ws = false;
        }
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t at = i;
        const char32_t cp = next_codepoint(text, i);
        if (policy.is_whitespace(cp)) {
            flush_form(at);
            if (!in_ws) {
                ws_start = at;
                in_ws = true;
            }
        } else if (policy.is_punctuation(cp)) {
            flush_form(at);
            flush_ws(at);
            items.push_back({std::string(text.substr(at, i - at)), ItemKind::Delimiter});
        } else if (policy.is_apostrophe(cp)) {
            // Ends the current form, apostrophe included on the left piece.
            flush_ws(at);
            if (!in_form) {
                form_start = at;
                in_form = true;
            }
            flush_form(i);
        } else {
            flush_ws(at);
            if (!in_form) {
                form_start = at;
                in_form = true;
            }
        }
    }
    flush_form(text.size());
    flush_ws(text.size());
    return items;
}

}  // namespace epochscope
