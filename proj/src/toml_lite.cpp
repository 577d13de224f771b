#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "adsql/io.hpp"

namespace adsql {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    std::map<std::string, TomlValue> run() {
        std::string table;
        for (;;) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                ++p_;
                if (peek() == '[') fail("arrays of tables are not supported");
                skip_ws();
                table = key_path();
                skip_ws();
                expect(']');
                end_of_line();
                if (!tables_.insert(table).second) fail("table [" + table + "] defined twice");
                continue;
            }
            const std::string key = key_path();
            skip_ws();
            expect('=');
            skip_ws();
            value_into(table.empty() ? key : table + "." + key);
            end_of_line();
        }
        return std::move(out_);
    }

private:
    const std::string& s_;
    size_t p_ = 0;
    int line_ = 1;
    std::map<std::string, TomlValue> out_;
    std::set<std::string> tables_;

    bool eof() const { return p_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[p_]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("toml line " + std::to_string(line_) + ": " + what);
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++p_;
    }
    void skip_ws() {
        while (peek() == ' ' || peek() == '\t') ++p_;
    }
    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') ++p_;
    }
    void newline() {
        if (peek() == '\r') ++p_;
        expect('\n');
        ++line_;
    }
    void skip_blank_lines() {
        for (;;) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r')
                newline();
            else
                return;
        }
    }
    // whitespace, comments and newlines inside arrays
    void skip_layout() {
        for (;;) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r')
                newline();
            else
                return;
        }
    }
    void end_of_line() {
        skip_ws();
        skip_comment();
        if (!eof()) newline();
    }

    std::string key_part() {
        if (peek() == '"') return basic_string();
        std::string k;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') k += s_[p_++];
        if (k.empty()) fail("expected a key");
        return k;
    }
    std::string key_path() {
        std::string k = key_part();
        skip_ws();
        while (peek() == '.') {
            ++p_;
            skip_ws();
            k += "." + key_part();
            skip_ws();
        }
        return k;
    }

    std::string basic_string() {
        expect('"');
        std::string v;
        for (;;) {
            if (eof() || peek() == '\n') fail("unterminated string");
            char c = s_[p_++];
            if (c == '"') return v;
            if (c == '\\') {
                if (eof()) fail("unterminated string");
                switch (s_[p_++]) {
                    case '"': v += '"'; break;
                    case '\\': v += '\\'; break;
                    case 'n': v += '\n'; break;
                    case 't': v += '\t'; break;
                    case 'r': v += '\r'; break;
                    default: fail("unsupported escape");
                }
            } else {
                v += c;
            }
        }
    }
    std::string literal_string() {
        expect('\'');
        std::string v;
        while (peek() != '\'') {
            if (eof() || peek() == '\n') fail("unterminated string");
            v += s_[p_++];
        }
        ++p_;
        return v;
    }

    double number() {
        std::string tok;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' || peek() == '.' ||
               peek() == '_')
            tok += s_[p_++];
        std::string clean;
        for (char c : tok)
            if (c != '_') clean += c;
        if (clean.empty()) fail("expected a value");
        const char* b = clean.data() + (clean[0] == '+' ? 1 : 0);
        double v = 0;
        const auto res = std::from_chars(b, clean.data() + clean.size(), v);
        if (res.ec != std::errc() || res.ptr != clean.data() + clean.size()) fail("bad value '" + tok + "'");
        return v;
    }

    TomlValue scalar_or_array() {
        const char c = peek();
        if (c == '"') return {basic_string()};
        if (c == '\'') return {literal_string()};
        if (c == '[') return {array()};
        if (c == '{') fail("inline tables are only allowed as key values");
        if (s_.compare(p_, 4, "true") == 0 && !std::isalnum(static_cast<unsigned char>(p_ + 4 < s_.size() ? s_[p_ + 4] : ' '))) {
            p_ += 4;
            return {true};
        }
        if (s_.compare(p_, 5, "false") == 0 && !std::isalnum(static_cast<unsigned char>(p_ + 5 < s_.size() ? s_[p_ + 5] : ' '))) {
            p_ += 5;
            return {false};
        }
        return {number()};
    }

    TomlArray array() {
        expect('[');
        TomlArray a;
        skip_layout();
        while (peek() != ']') {
            TomlValue v = scalar_or_array();
            if (std::holds_alternative<TomlArray>(v.v)) fail("nested arrays are not supported");
            a.push_back(std::move(v));
            skip_layout();
            if (peek() == ',') {
                ++p_;
                skip_layout();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        ++p_;
        return a;
    }

    void store(const std::string& key, TomlValue v) {
        if (!out_.emplace(key, std::move(v)).second) fail("duplicate key " + key);
    }

    void value_into(const std::string& key) {
        if (peek() != '{') {
            store(key, scalar_or_array());
            return;
        }
        ++p_;
        skip_ws();
        while (peek() != '}') {
            const std::string k = key_path();
            skip_ws();
            expect('=');
            skip_ws();
            value_into(key + "." + k);
            skip_ws();
            if (peek() == ',') {
                ++p_;
                skip_ws();
                if (peek() == '}') fail("trailing comma in inline table");
            } else if (peek() != '}') {
                fail("expected ',' or '}' in inline table");
            }
        }
        ++p_;
    }
};

}  // namespace

TomlDocument TomlDocument::parse(const std::string& text) {
    TomlDocument d;
    d.entries_ = Parser(text).run();
    return d;
}

TomlDocument TomlDocument::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const TomlValue* TomlDocument::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

std::string TomlDocument::get_string(const std::string& key, const std::string& fallback) const {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (auto s = std::get_if<std::string>(&v->v)) return *s;
    throw FormatError("config: " + key + " must be a string");
}

double TomlDocument::get_number(const std::string& key, double fallback) const {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (auto d = std::get_if<double>(&v->v)) return *d;
    throw FormatError("config: " + key + " must be a number");
}

bool TomlDocument::get_bool(const std::string& key, bool fallback) const {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (auto b = std::get_if<bool>(&v->v)) return *b;
    throw FormatError("config: " + key + " must be a boolean");
}

std::vector<double> TomlDocument::get_numbers(const std::string& key, const std::vector<double>& fallback) const {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    auto a = std::get_if<TomlArray>(&v->v);
    if (!a) throw FormatError("config: " + key + " must be an array of numbers");
    std::vector<double> out;
    for (const TomlValue& e : *a) {
        auto d = std::get_if<double>(&e.v);
        if (!d) throw FormatError("config: " + key + " must be an array of numbers");
        out.push_back(*d);
    }
    return out;
}

}  // namespace adsql
