#pragma once

#include <string>
#include <string_view>

namespace featmatch::textnorm {

/// Porter suffix-stripping stem of a lowercase token.
///
/// Tokens of length <= 2 and tokens containing characters outside
/// [a-z] (digits survive sanitization) are returned unchanged.
std::string porter_stem(std::string_view word);

} // namespace featmatch::textnorm
