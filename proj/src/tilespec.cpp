// Copyright (C) 2026 The Tilecraft Authors
// SPDX-License-Identifier: Apache-2.0

#include "tilecraft/tilespec.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace tilecraft::tilespec {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Lex: return "lex";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Reference: return "reference";
    }
    return "?";
}

namespace {

enum class Tok { Ident, String, Int, Float, Colon, Tilde, LBrace, RBrace, Comma, Dot, Equals, End };

std::string_view describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::Int: return "integer";
    case Tok::Float: return "number";
    case Tok::Colon: return "':'";
    case Tok::Tilde: return "'~'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind = Tok::End;
    std::string text; ///< Identifier name, unescaped string contents, or number text.
    SourceSpan span;
    bool line_start = false;
};

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run(std::vector<ParseError>& errors) {
        std::vector<Token> out;
        bool at_line_start = true;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                advance();
                at_line_start = true;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
                continue;
            }
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
                continue;
            }
            Token tok;
            tok.line_start = at_line_start;
            at_line_start = false;
            tok.span = {line_, col_, 1};
            const std::size_t begin = pos_;
            if (ident_start(c)) {
                while (pos_ < text_.size() && ident_char(text_[pos_])) {
                    advance();
                }
                tok.kind = Tok::Ident;
                tok.text = std::string(text_.substr(begin, pos_ - begin));
            } else if (digit(c) || ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
                                    (digit(text_[pos_ + 1]) || text_[pos_ + 1] == '.'))) {
                lex_number(tok);
            } else if (c == '"') {
                if (!lex_string(tok, errors)) {
                    continue;
                }
            } else {
                advance();
                switch (c) {
                case ':': tok.kind = Tok::Colon; break;
                case '~': tok.kind = Tok::Tilde; break;
                case '{': tok.kind = Tok::LBrace; break;
                case '}': tok.kind = Tok::RBrace; break;
                case ',': tok.kind = Tok::Comma; break;
                case '.': tok.kind = Tok::Dot; break;
                case '=': tok.kind = Tok::Equals; break;
                default: {
                    // Swallow the rest of a multi-byte UTF-8 sequence as one bad token.
                    while (pos_ < text_.size() &&
                           (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) {
                        advance();
                    }
                    errors.push_back({{tok.span.line, tok.span.column, static_cast<int>(pos_ - begin)},
                                      ErrorKind::Lex,
                                      "unexpected character '" +
                                          std::string(text_.substr(begin, pos_ - begin)) + "'"});
                    continue;
                }
                }
            }
            tok.span.length = static_cast<int>(pos_ - begin);
            out.push_back(std::move(tok));
        }
        Token end;
        end.kind = Tok::End;
        end.span = {line_, col_, 0};
        end.line_start = true;
        out.push_back(end);
        return out;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
            ++col_;
        }
        ++pos_;
    }

    void lex_number(Token& tok) {
        const std::size_t begin = pos_;
        bool is_float = false;
        if (text_[pos_] == '-' || text_[pos_] == '+') {
            advance();
        }
        while (pos_ < text_.size() && digit(text_[pos_])) {
            advance();
        }
        if (pos_ < text_.size() && text_[pos_] == '.' && pos_ + 1 < text_.size() &&
            digit(text_[pos_ + 1])) {
            is_float = true;
            advance();
            while (pos_ < text_.size() && digit(text_[pos_])) {
                advance();
            }
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '-' || text_[look] == '+')) {
                ++look;
            }
            if (look < text_.size() && digit(text_[look])) {
                is_float = true;
                while (pos_ < look) {
                    advance();
                }
                while (pos_ < text_.size() && digit(text_[pos_])) {
                    advance();
                }
            }
        }
        tok.kind = is_float ? Tok::Float : Tok::Int;
        tok.text = std::string(text_.substr(begin, pos_ - begin));
    }

    bool lex_string(Token& tok, std::vector<ParseError>& errors) {
        const std::size_t begin = pos_;
        advance();
        std::string value;
        while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                char e = text_[pos_ + 1];
                advance();
                advance();
                switch (e) {
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case '"': value += '"'; break;
                case '\\': value += '\\'; break;
                default:
                    errors.push_back({{line_, col_ - 2, 2},
                                      ErrorKind::Lex,
                                      std::string("unknown escape '\\") + e + "'"});
                }
                continue;
            }
            value += c;
            advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != '"') {
            errors.push_back({{tok.span.line, tok.span.column, static_cast<int>(pos_ - begin)},
                              ErrorKind::Lex,
                              "unterminated string"});
            return false;
        }
        advance();
        tok.kind = Tok::String;
        tok.text = std::move(value);
        return true;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_statement_keyword(const Token& t) {
    return t.kind == Tok::Ident && (t.text == "image" || t.text == "tile" || t.text == "set");
}

struct PendingRef {
    std::string image;
    Side side;
    SourceSpan span;
};

struct PendingConstraint {
    Constraint constraint;
    std::vector<PendingRef> a;
    std::vector<PendingRef> b;
    bool explicit_window = false;
};

struct SyntaxFailure {};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<ParseError>& errors)
        : toks_(std::move(tokens)), errors_(errors) {}

    void run() {
        while (peek().kind != Tok::End) {
            try {
                statement();
            } catch (const SyntaxFailure&) {
                recover();
            }
        }
    }

    std::vector<ImageSlot> images;
    std::vector<SourceSpan> image_spans;
    std::vector<PendingConstraint> constraints;
    std::map<std::string, std::string> settings;

private:
    const Token& peek() const { return toks_[pos_]; }

    const Token& take() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::End) {
            ++pos_;
        }
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& message) {
        errors_.push_back({at.span, ErrorKind::Syntax, message});
        throw SyntaxFailure{};
    }

    const Token& expect(Tok kind, std::string_view what) {
        const Token& t = peek();
        if (t.kind != kind) {
            fail(t, "expected " + std::string(what) + ", found " + found(t));
        }
        return take();
    }

    void expect_keyword(std::string_view word) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || t.text != word) {
            fail(t, "expected '" + std::string(word) + "', found " + found(t));
        }
        take();
    }

    static std::string found(const Token& t) {
        if (t.kind == Tok::Ident) {
            return "'" + t.text + "'";
        }
        return std::string(describe(t.kind));
    }

    void recover() {
        // Always make progress, then skip to the next keyword at the start of a line.
        if (peek().kind != Tok::End) {
            take();
        }
        while (peek().kind != Tok::End && !(peek().line_start && is_statement_keyword(peek()))) {
            take();
        }
    }

    void statement() {
        const Token& head = peek();
        if (head.kind == Tok::Ident && head.text == "image") {
            image_statement();
        } else if (head.kind == Tok::Ident && head.text == "tile") {
            tile_statement();
        } else if (head.kind == Tok::Ident && head.text == "set") {
            set_statement();
        } else {
            fail(head, "expected 'image', 'tile' or 'set', found " + found(head));
        }
    }

    void image_statement() {
        take();
        const Token& name = expect(Tok::Ident, "image name");
        ImageSlot slot;
        slot.id = name.text;
        SourceSpan span = name.span;
        expect_keyword("prompt");
        slot.prompt = expect(Tok::String, "prompt string").text;
        if (peek().kind == Tok::Ident && peek().text == "init") {
            take();
            slot.init_path = expect(Tok::String, "init image path").text;
        }
        images.push_back(std::move(slot));
        image_spans.push_back(span);
    }

    PendingRef side_ref() {
        const Token& name = expect(Tok::Ident, "image name");
        PendingRef ref;
        ref.image = name.text;
        ref.span = name.span;
        expect(Tok::Dot, "'.'");
        const Token& side = expect(Tok::Ident, "side name");
        auto parsed = side_from_string(side.text);
        if (!parsed) {
            fail(side, "unknown side '" + side.text + "' (expected left, right, top or bottom)");
        }
        ref.side = *parsed;
        ref.span.length = side.span.column + side.span.length - name.span.column;
        if (side.span.line != name.span.line) {
            ref.span.length = name.span.length;
        }
        return ref;
    }

    std::vector<PendingRef> side_set() {
        expect(Tok::LBrace, "'{'");
        std::vector<PendingRef> set;
        set.push_back(side_ref());
        while (peek().kind == Tok::Comma) {
            take();
            set.push_back(side_ref());
        }
        expect(Tok::RBrace, "'}' or ','");
        return set;
    }

    void tile_statement() {
        const Token& kw = take();
        const Token& name = expect(Tok::Ident, "constraint name");
        PendingConstraint pc;
        pc.constraint.id = name.text;
        pc.constraint.span = SourceSpan{kw.span.line, kw.span.column, 0};
        expect(Tok::Colon, "':'");
        pc.a = side_set();
        expect(Tok::Tilde, "'~'");
        pc.b = side_set();
        if (peek().kind == Tok::Ident && peek().text == "w" && !peek().line_start) {
            take();
            expect(Tok::Equals, "'='");
            const Token& value = expect(Tok::Int, "integer window width");
            int w = 0;
            auto [ptr, ec] = std::from_chars(value.text.data() + (value.text[0] == '+' ? 1 : 0),
                                             value.text.data() + value.text.size(), w);
            if (ec != std::errc{}) {
                fail(value, "window width '" + value.text + "' out of range");
            }
            pc.constraint.context_window = w;
            pc.constraint.window_span = value.span;
            pc.explicit_window = true;
        }
        const Token& last = toks_[pos_ - 1];
        if (last.span.line == kw.span.line) {
            pc.constraint.span->length = last.span.column + last.span.length - kw.span.column;
        } else {
            pc.constraint.span->length = kw.span.length;
        }
        constraints.push_back(std::move(pc));
    }

    void set_statement() {
        take();
        const Token& key = expect(Tok::Ident, "setting name");
        expect(Tok::Equals, "'='");
        const Token& value = peek();
        if (value.kind != Tok::Ident && value.kind != Tok::String && value.kind != Tok::Int &&
            value.kind != Tok::Float) {
            fail(value, "expected a setting value, found " + found(value));
        }
        take();
        settings[key.text] = value.text;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<ParseError>& errors_;
};

bool bare_value(const std::string& v) {
    if (v.empty()) {
        return false;
    }
    if (ident_start(v[0])) {
        return std::all_of(v.begin(), v.end(), ident_char);
    }
    // Numbers round-trip through the lexer unchanged.
    std::vector<ParseError> errs;
    auto toks = Lexer(v).run(errs);
    return errs.empty() && toks.size() == 2 &&
           (toks[0].kind == Tok::Int || toks[0].kind == Tok::Float) && toks[0].text == v;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

} // namespace

ParseResult parse(std::string_view text) {
    ParseResult result;
    auto& errors = result.errors;
    Parser parser(Lexer(text).run(errors), errors);
    parser.run();

    ConstraintSpec spec;
    spec.settings = parser.settings;
    std::set<std::string> seen_images;
    for (std::size_t i = 0; i < parser.images.size(); ++i) {
        if (!seen_images.insert(parser.images[i].id).second) {
            errors.push_back({parser.image_spans[i], ErrorKind::Reference,
                              "image '" + parser.images[i].id + "' is declared more than once"});
            continue;
        }
        spec.images.push_back(parser.images[i]);
    }

    int default_window = kDefaultContextWindow;
    if (auto it = spec.settings.find("w"); it != spec.settings.end()) {
        int w = 0;
        auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), w);
        if (ec == std::errc{} && ptr == it->second.data() + it->second.size()) {
            default_window = w;
        } else {
            errors.push_back({{1, 1, 0}, ErrorKind::Syntax,
                              "setting 'w' must be an integer, got '" + it->second + "'"});
        }
    }

    std::set<std::string> seen_constraints;
    for (auto& pc : parser.constraints) {
        Constraint c = std::move(pc.constraint);
        if (!seen_constraints.insert(c.id).second) {
            errors.push_back({c.span.value_or(SourceSpan{}), ErrorKind::Reference,
                              "constraint '" + c.id + "' is declared more than once"});
            continue;
        }
        if (!pc.explicit_window) {
            c.context_window = default_window;
        }
        auto resolve = [&](const std::vector<PendingRef>& refs, std::vector<SideRef>& out) {
            for (const auto& r : refs) {
                auto index = spec.find_image(r.image);
                if (!index) {
                    errors.push_back({r.span, ErrorKind::Reference,
                                      "side '" + r.image + "." + std::string(to_string(r.side)) +
                                          "' names undeclared image '" + r.image + "'"});
                    continue;
                }
                out.push_back({*index, r.side});
            }
        };
        resolve(pc.a, c.set_a);
        resolve(pc.b, c.set_b);
        spec.constraints.push_back(std::move(c));
    }

    std::stable_sort(errors.begin(), errors.end(), [](const ParseError& x, const ParseError& y) {
        return std::tie(x.span.line, x.span.column) < std::tie(y.span.line, y.span.column);
    });
    if (errors.empty()) {
        result.spec = std::move(spec);
    }
    return result;
}

std::string serialize(const ConstraintSpec& spec) {
    std::ostringstream out;
    for (const auto& [key, value] : spec.settings) {
        out << "set " << key << " = " << (bare_value(value) ? value : quote(value)) << "\n";
    }

    std::vector<const ImageSlot*> images;
    for (const auto& img : spec.images) {
        images.push_back(&img);
    }
    std::sort(images.begin(), images.end(),
              [](const ImageSlot* a, const ImageSlot* b) { return a->id < b->id; });
    for (const ImageSlot* img : images) {
        out << "image " << img->id << " prompt " << quote(img->prompt);
        if (img->init_path) {
            out << " init " << quote(*img->init_path);
        }
        out << "\n";
    }

    std::vector<const Constraint*> constraints;
    for (const auto& c : spec.constraints) {
        constraints.push_back(&c);
    }
    std::sort(constraints.begin(), constraints.end(),
              [](const Constraint* a, const Constraint* b) { return a->id < b->id; });
    auto write_set = [&](const std::vector<SideRef>& set) {
        out << "{";
        for (std::size_t i = 0; i < set.size(); ++i) {
            out << (i ? ", " : "") << format_side_ref(spec, set[i]);
        }
        out << "}";
    };
    for (const Constraint* c : constraints) {
        out << "tile " << c->id << ": ";
        write_set(c->set_a);
        out << " ~ ";
        write_set(c->set_b);
        out << " w=" << c->context_window << "\n";
    }
    return out.str();
}

std::string format_error(std::string_view source_name, const ParseError& error) {
    std::ostringstream out;
    out << source_name << ":" << error.span.line << ":" << error.span.column << ": "
        << to_string(error.kind) << " error: " << error.message;
    return out.str();
}

LatentDims latent_dims_from_settings(const ConstraintSpec& spec) {
    LatentDims dims;
    auto read = [&](const char* key, int& field) {
        auto it = spec.settings.find(key);
        if (it == spec.settings.end()) {
            return;
        }
        int v = 0;
        auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
        if (ec != std::errc{} || ptr != it->second.data() + it->second.size()) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string("setting '") + key + "' must be an integer");
        }
        field = v;
    };
    read("height", dims.height);
    read("width", dims.width);
    read("depth", dims.depth);
    return dims;
}

} // namespace tilecraft::tilespec
