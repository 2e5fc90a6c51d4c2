#include "lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "cgrl/frontend.hpp"

namespace cgrl::detail {

namespace {

constexpr std::array kKeywords = {"function", "var",  "return", "if",   "else", "while",
                                  "for",      "in",   "true",   "false", "null", "this"};

// Longest first so that maximal munch works with a linear scan.
constexpr std::array kPuncts = {"===", "!==", "==", "!=", "<=", ">=", "&&", "||", "{", "}",
                                "(",   ")",   "[",  "]",  ";",  ",",  ".",  ":",  "=", "+",
                                "-",   "*",   "/",  "%",  "<",  ">",  "!"};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool identPart(char c) { return identStart(c) || std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

bool isKeyword(std::string_view word) {
    for (const char* k : kKeywords)
        if (word == k) return true;
    return false;
}

std::vector<Token> tokenize(std::string_view src, const std::string& unit, int evalDepth) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 0;
    auto here = [&] { return SourceLoc{unit, line, col, evalDepth}; };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 0;
            } else {
                ++col;
            }
        }
    };

    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            SourceLoc start = here();
            advance(2);
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
            if (i + 1 >= src.size()) throw SyntaxError(start, "unterminated comment");
            advance(2);
            continue;
        }

        Token tok;
        tok.loc = here();
        if (identStart(c)) {
            std::size_t j = i;
            while (j < src.size() && identPart(src[j])) ++j;
            tok.text = std::string(src.substr(i, j - i));
            tok.kind = isKeyword(tok.text) ? TokKind::Keyword : TokKind::Ident;
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            tok.kind = TokKind::Number;
            tok.text = std::string(src.substr(i, j - i));
            tok.number = std::strtod(tok.text.c_str(), nullptr);
            advance(j - i);
        } else if (c == '"' || c == '\'') {
            tok.kind = TokKind::String;
            advance(1);
            while (true) {
                if (i >= src.size() || src[i] == '\n') throw SyntaxError(tok.loc, "unterminated string literal");
                char d = src[i];
                if (d == c) {
                    advance(1);
                    break;
                }
                if (d == '\\') {
                    if (i + 1 >= src.size()) throw SyntaxError(tok.loc, "unterminated string literal");
                    char e = src[i + 1];
                    switch (e) {
                        case 'n': tok.text += '\n'; break;
                        case 't': tok.text += '\t'; break;
                        case '\\': tok.text += '\\'; break;
                        case '"': tok.text += '"'; break;
                        case '\'': tok.text += '\''; break;
                        default: throw SyntaxError(here(), std::string("unknown escape \\") + e);
                    }
                    advance(2);
                    continue;
                }
                tok.text += d;
                advance(1);
            }
        } else {
            bool matched = false;
            for (const char* p : kPuncts) {
                std::string_view pv(p);
                if (src.substr(i, pv.size()) == pv) {
                    tok.kind = TokKind::Punct;
                    tok.text = std::string(pv);
                    advance(pv.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) throw SyntaxError(tok.loc, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = TokKind::End;
    end.loc = here();
    out.push_back(std::move(end));
    return out;
}

}  // namespace cgrl::detail
