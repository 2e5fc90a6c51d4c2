// Internal to the frontend.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cgrl/source_loc.hpp"

namespace cgrl::detail {

enum class TokKind { Ident, Keyword, Number, String, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;  // identifier/keyword/punctuator spelling, or decoded string
    double number = 0;
    SourceLoc loc;
};

/// Tokenizes the whole input up front. Throws SyntaxError.
std::vector<Token> tokenize(std::string_view source, const std::string& unit, int evalDepth);

bool isKeyword(std::string_view word);

}  // namespace cgrl::detail
