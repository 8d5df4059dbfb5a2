#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fv::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// True when `text` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid(std::string_view text) noexcept;

/// Decodes to Unicode scalar values; malformed sequences become U+FFFD.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view scalars);
void append(std::string& out, char32_t scalar);

/// Number of Unicode scalar values (ill-formed bytes count one each).
std::size_t count_scalars(std::string_view text) noexcept;

bool is_whitespace(char32_t c) noexcept;
bool is_punctuation(char32_t c) noexcept;
bool is_letter_or_digit(char32_t c) noexcept;

/// Simple one-to-one lowercase mapping for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t c) noexcept;
std::string to_lower(std::string_view text);

}  // namespace fv::utf8
