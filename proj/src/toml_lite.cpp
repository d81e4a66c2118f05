#include "rspec/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "rspec/errors.hpp"

namespace rspec {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw ConfigError("toml: line " + std::to_string(line_no) + ": " + what);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (c == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string parse_basic_string(const std::string& s, int line_no) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"')
        fail(line_no, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '\\') {
            if (i + 2 >= s.size()) fail(line_no, "dangling escape");
            const char esc = s[++i];
            switch (esc) {
            case 'n': c = '\n'; break;
            case 't': c = '\t'; break;
            case 'r': c = '\r'; break;
            case '"': c = '"'; break;
            case '\\': c = '\\'; break;
            default: fail(line_no, "unsupported escape sequence");
            }
        } else if (c == '"') {
            fail(line_no, "unescaped quote inside string");
        }
        out.push_back(c);
    }
    return out;
}

nlohmann::json parse_scalar(const std::string& raw, int line_no) {
    const std::string s = trim(raw);
    if (s.empty()) fail(line_no, "missing value");
    if (s.front() == '"') return parse_basic_string(s, line_no);
    if (s == "true") return true;
    if (s == "false") return false;

    const bool looks_float = s.find_first_of(".eE") != std::string::npos ||
                             s == "inf" || s == "-inf" || s == "nan";
    char* end = nullptr;
    if (!looks_float) {
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (end == s.c_str() + s.size()) return v;
    }
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail(line_no, "cannot parse value '" + s + "'");
    return v;
}

nlohmann::json parse_value(const std::string& raw, int line_no) {
    const std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') fail(line_no, "array must close on the same line");
        nlohmann::json arr = nlohmann::json::array();
        std::string body = s.substr(1, s.size() - 2);
        bool in_string = false;
        std::string cell;
        for (std::size_t i = 0; i < body.size(); ++i) {
            const char c = body[i];
            if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_string = !in_string;
            if (c == ',' && !in_string) {
                if (!trim(cell).empty()) arr.push_back(parse_scalar(cell, line_no));
                cell.clear();
            } else {
                cell.push_back(c);
            }
        }
        if (!trim(cell).empty()) arr.push_back(parse_scalar(cell, line_no));
        return arr;
    }
    return parse_scalar(s, line_no);
}

std::vector<std::string> split_key_path(const std::string& s, int line_no) {
    std::vector<std::string> parts;
    std::string part;
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '"') {
            in_string = !in_string;
            continue;
        }
        if (c == '.' && !in_string) {
            parts.push_back(trim(part));
            part.clear();
        } else {
            part.push_back(c);
        }
    }
    parts.push_back(trim(part));
    for (const auto& p : parts)
        if (p.empty()) fail(line_no, "empty key component");
    return parts;
}

nlohmann::json* descend(nlohmann::json& root, const std::vector<std::string>& path,
                        int line_no) {
    nlohmann::json* node = &root;
    for (const auto& key : path) {
        if (!node->is_object()) fail(line_no, "key path crosses a non-table value");
        node = &(*node)[key];
        if (node->is_null()) *node = nlohmann::json::object();
    }
    return node;
}

} // namespace

nlohmann::json parse_toml(const std::string& text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated table header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) fail(line_no, "empty table header");
            table = descend(root, split_key_path(name, line_no), line_no);
            continue;
        }

        // key = value, with a possibly dotted or quoted key.
        bool in_string = false;
        std::size_t eq = std::string::npos;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '=' && !in_string) {
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const auto path = split_key_path(trim(line.substr(0, eq)), line_no);
        nlohmann::json* parent = table;
        if (path.size() > 1)
            parent = descend(*table, {path.begin(), path.end() - 1}, line_no);
        const std::string& leaf = path.back();
        if (parent->contains(leaf)) fail(line_no, "duplicate key '" + leaf + "'");
        (*parent)[leaf] = parse_value(line.substr(eq + 1), line_no);
    }
    return root;
}

} // namespace rspec
