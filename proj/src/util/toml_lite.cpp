#include "util/toml_lite.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cx::util {

namespace {

using nlohmann::json;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    int line;

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    void skip_ws() {
        while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
};

std::string parse_basic_string(Cursor& c) {
    // c.i at opening quote
    char quote = c.s[c.i++];
    std::string out;
    while (!c.done() && c.s[c.i] != quote) {
        char ch = c.s[c.i++];
        if (quote == '"' && ch == '\\' && !c.done()) {
            char esc = c.s[c.i++];
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail(c.line, std::string("unsupported escape \\") + esc);
            }
        } else {
            out += ch;
        }
    }
    if (c.done()) fail(c.line, "unterminated string");
    ++c.i;  // closing quote
    return out;
}

json parse_value(Cursor& c);

json parse_array(Cursor& c) {
    ++c.i;  // '['
    json arr = json::array();
    c.skip_ws();
    while (!c.done() && c.peek() != ']') {
        arr.push_back(parse_value(c));
        c.skip_ws();
        if (!c.done() && c.peek() == ',') {
            ++c.i;
            c.skip_ws();
        }
    }
    if (c.done()) fail(c.line, "unterminated array");
    ++c.i;  // ']'
    return arr;
}

json parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) fail(c.line, "missing value");
    char ch = c.peek();
    if (ch == '"' || ch == '\'') return parse_basic_string(c);
    if (ch == '[') return parse_array(c);

    std::size_t start = c.i;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' &&
           c.peek() != ' ' && c.peek() != '\t')
        ++c.i;
    std::string tok = c.s.substr(start, c.i - start);
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.empty()) fail(c.line, "missing value");

    bool is_float = tok.find('.') != std::string::npos || tok.find('e') != std::string::npos ||
                    tok.find('E') != std::string::npos;
    try {
        std::size_t used = 0;
        if (is_float) {
            double d = std::stod(tok, &used);
            if (used != tok.size()) fail(c.line, "bad number: " + tok);
            return d;
        }
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) fail(c.line, "bad number: " + tok);
        return v;
    } catch (const std::logic_error&) {
        fail(c.line, "unrecognized value: " + tok);
    }
}

std::vector<std::string> split_dotted(const std::string& key, int line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : key) {
        if (ch == '.') {
            if (cur.empty()) fail(line, "empty path segment in '" + key + "'");
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (cur.empty()) fail(line, "empty path segment in '" + key + "'");
    parts.push_back(cur);
    return parts;
}

json* descend(json& root, const std::vector<std::string>& path) {
    json* node = &root;
    for (const auto& p : path) {
        if (!node->contains(p)) (*node)[p] = json::object();
        node = &(*node)[p];
    }
    return node;
}

}  // namespace

json parse_toml(const std::string& text) {
    json root = json::object();
    json* table = &root;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        Cursor c{raw, 0, line_no};
        c.skip_ws();
        if (c.done() || c.peek() == '#') continue;

        if (c.peek() == '[') {
            ++c.i;
            std::size_t close = raw.find(']', c.i);
            if (close == std::string::npos) fail(line_no, "unterminated table header");
            std::string name = raw.substr(c.i, close - c.i);
            table = descend(root, split_dotted(name, line_no));
            continue;
        }

        std::string key;
        if (c.peek() == '"' || c.peek() == '\'') {
            key = parse_basic_string(c);
        } else {
            std::size_t start = c.i;
            while (!c.done() && c.peek() != '=' && c.peek() != ' ' && c.peek() != '\t') ++c.i;
            key = raw.substr(start, c.i - start);
        }
        if (key.empty()) fail(line_no, "missing key");
        c.skip_ws();
        if (c.done() || c.peek() != '=') fail(line_no, "expected '=' after key '" + key + "'");
        ++c.i;

        json value = parse_value(c);
        c.skip_ws();
        if (!c.done() && c.peek() != '#') fail(line_no, "trailing characters after value");

        if (key.find('.') != std::string::npos) {
            auto path = split_dotted(key, line_no);
            std::string leaf = path.back();
            path.pop_back();
            (*descend(*table, path))[leaf] = value;
        } else {
            (*table)[key] = value;
        }
    }
    return root;
}

}  // namespace cx::util
