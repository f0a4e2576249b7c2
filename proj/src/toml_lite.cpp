#include "funcspace/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "funcspace/errors.hpp"

namespace funcspace::toml {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    nlohmann::json document() {
        nlohmann::json root = nlohmann::json::object();
        nlohmann::json* table = &root;
        skip_space(true);
        while (!eof()) {
            if (peek() == '[') {
                table = &open_table(root);
            } else {
                auto [key, value] = key_value();
                (*table)[key] = std::move(value);
            }
            skip_space(true);
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw config_error("toml: " + what + " (line " + std::to_string(line_) + ")");
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    /// Skips blanks and comments; newlines too when allow_newline.
    void skip_space(bool allow_newline) {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r' || (allow_newline && c == '\n')) {
                take();
            } else {
                break;
            }
        }
    }

    nlohmann::json& open_table(nlohmann::json& root) {
        take();  // '['
        std::string name;
        while (!eof() && peek() != ']') name += take();
        if (eof()) fail("unterminated table header");
        take();  // ']'
        nlohmann::json* table = &root;
        std::stringstream parts(name);
        std::string part;
        while (std::getline(parts, part, '.')) {
            while (!part.empty() && (part.front() == ' ')) part.erase(part.begin());
            while (!part.empty() && (part.back() == ' ')) part.pop_back();
            if (part.empty()) fail("empty table name component");
            table = &(*table)[part];
            if (table->is_null()) *table = nlohmann::json::object();
        }
        return *table;
    }

    std::string key() {
        skip_space(false);
        if (eof()) fail("expected a key");
        if (peek() == '"') return string_value();
        std::string k;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                k += take();
            else
                break;
        }
        if (k.empty()) fail("expected a key");
        return k;
    }

    std::pair<std::string, nlohmann::json> key_value() {
        std::string k = key();
        skip_space(false);
        if (eof() || peek() != '=') fail("expected '=' after key \"" + k + "\"");
        take();
        skip_space(false);
        return {std::move(k), value()};
    }

    nlohmann::json value() {
        if (eof()) fail("expected a value");
        char c = peek();
        if (c == '"') return string_value();
        if (c == '[') return array_value();
        if (c == '{') return inline_table();
        if (std::isalpha(static_cast<unsigned char>(c))) return word_value();
        return number_value();
    }

    nlohmann::json string_value() {
        take();  // opening quote
        std::string s;
        while (!eof() && peek() != '"') {
            char c = take();
            if (c == '\\') {
                if (eof()) fail("unterminated escape");
                char e = take();
                switch (e) {
                    case '"': s += '"'; break;
                    case '\\': s += '\\'; break;
                    case 'n': s += '\n'; break;
                    case 't': s += '\t'; break;
                    case 'r': s += '\r'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else if (c == '\n') {
                fail("newline inside string");
            } else {
                s += c;
            }
        }
        if (eof()) fail("unterminated string");
        take();  // closing quote
        return s;
    }

    nlohmann::json word_value() {
        std::string w;
        while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) w += take();
        if (w == "true") return true;
        if (w == "false") return false;
        if (w == "inf") return std::numeric_limits<double>::infinity();
        if (w == "nan") fail("nan is not a valid config value");
        fail("unexpected token \"" + w + "\"");
    }

    nlohmann::json number_value() {
        std::string num;
        while (!eof()) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
                c == 'e' || c == 'E' || c == '_')
                num += take();
            else
                break;
        }
        num.erase(std::remove(num.begin(), num.end(), '_'), num.end());
        if (num.empty()) fail("expected a number");
        errno = 0;
        char* end = nullptr;
        double d = std::strtod(num.c_str(), &end);
        if (end != num.c_str() + num.size() || errno == ERANGE)
            fail("malformed number \"" + num + "\"");
        if (num.find('.') == std::string::npos && num.find('e') == std::string::npos &&
            num.find('E') == std::string::npos) {
            long long i = std::strtoll(num.c_str(), nullptr, 10);
            if (static_cast<double>(i) == d) return i;
        }
        return d;
    }

    nlohmann::json array_value() {
        take();  // '['
        nlohmann::json arr = nlohmann::json::array();
        skip_space(true);
        while (!eof() && peek() != ']') {
            arr.push_back(value());
            skip_space(true);
            if (!eof() && peek() == ',') {
                take();
                skip_space(true);
            }
        }
        if (eof()) fail("unterminated array");
        take();  // ']'
        return arr;
    }

    nlohmann::json inline_table() {
        take();  // '{'
        nlohmann::json obj = nlohmann::json::object();
        skip_space(true);
        while (!eof() && peek() != '}') {
            auto [k, v] = key_value();
            obj[k] = std::move(v);
            skip_space(true);
            if (!eof() && peek() == ',') {
                take();
                skip_space(true);
            }
        }
        if (eof()) fail("unterminated inline table");
        take();  // '}'
        return obj;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace

nlohmann::json parse(const std::string& text) { return Parser(text).document(); }

nlohmann::json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace funcspace::toml
