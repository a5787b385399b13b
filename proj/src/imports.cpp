#include "depwatch/imports.hpp"

#include "depwatch/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace depwatch::imports {

namespace {

enum class Kind { ident, string, template_open, template_close, number, regex, punct };

struct Token {
    Kind kind;
    std::string text;
    std::size_t line;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '#' ||
           static_cast<unsigned char>(c) >= 0x80;
}
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// After these keywords a '/' starts a regular expression literal.
bool keyword_before_expression(std::string_view w) {
    static const std::unordered_set<std::string_view> kWords{
        "return", "typeof", "instanceof", "in", "of", "new", "delete", "void",
        "throw", "case", "do", "else", "yield", "await", "extends"};
    return kWords.count(w) > 0;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : s_(src) {}

    std::vector<Token> run() {
        if (s_.substr(0, 2) == "#!") skip_line();
        while (i_ < s_.size()) step();
        return std::move(out_);
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    int braces_ = 0;
    std::vector<int> templates_;  // brace depth at each open substitution
    std::vector<Token> out_;

    char at(std::size_t k) const { return k < s_.size() ? s_[k] : '\0'; }

    void skip_line() {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
    }

    void emit(Kind k, std::string text, std::size_t line) { out_.push_back({k, std::move(text), line}); }

    void step() {
        const char c = s_[i_];
        if (c == '\n') {
            ++line_;
            ++i_;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i_;
        } else if (c == '/' && at(i_ + 1) == '/') {
            skip_line();
        } else if (c == '/' && at(i_ + 1) == '*') {
            i_ += 2;
            while (i_ < s_.size() && !(s_[i_] == '*' && at(i_ + 1) == '/')) {
                if (s_[i_] == '\n') ++line_;
                ++i_;
            }
            i_ = std::min(i_ + 2, s_.size());
        } else if (c == '\'' || c == '"') {
            quoted(c);
        } else if (c == '`') {
            ++i_;
            template_body(line_, false);
        } else if (c == '{') {
            ++braces_;
            emit(Kind::punct, "{", line_);
            ++i_;
        } else if (c == '}') {
            ++i_;
            if (!templates_.empty() && templates_.back() == braces_ - 1) {
                --braces_;
                templates_.pop_back();
                template_body(line_, true);
            } else {
                --braces_;
                emit(Kind::punct, "}", line_);
            }
        } else if (ident_start(c)) {
            const auto start = i_;
            while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
            emit(Kind::ident, std::string(s_.substr(start, i_ - start)), line_);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            const auto start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' || s_[i_] == '_')) ++i_;
            emit(Kind::number, std::string(s_.substr(start, i_ - start)), line_);
        } else if (c == '/' && regex_allowed() && regex()) {
            // consumed
        } else {
            emit(Kind::punct, std::string(1, c), line_);
            ++i_;
        }
    }

    void quoted(char quote) {
        const auto line = line_;
        std::string text;
        ++i_;
        while (i_ < s_.size() && s_[i_] != quote) {
            if (s_[i_] == '\n') break;  // unterminated; resynchronise on the next line
            if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
                if (s_[i_ + 1] == '\n') ++line_;
                text += s_[i_ + 1];
                i_ += 2;
                continue;
            }
            text += s_[i_++];
        }
        if (i_ < s_.size() && s_[i_] == quote) ++i_;
        emit(Kind::string, std::move(text), line);
    }

    // Reads template text up to the closing backtick or the next `${`.
    void template_body(std::size_t line, bool continuation) {
        std::string text;
        while (i_ < s_.size()) {
            const char c = s_[i_];
            if (c == '\\' && i_ + 1 < s_.size()) {
                if (s_[i_ + 1] == '\n') ++line_;
                text += s_[i_ + 1];
                i_ += 2;
            } else if (c == '`') {
                ++i_;
                emit(continuation ? Kind::template_close : Kind::string, std::move(text), line);
                return;
            } else if (c == '$' && at(i_ + 1) == '{') {
                i_ += 2;
                emit(Kind::template_open, std::move(text), line);
                templates_.push_back(braces_);
                ++braces_;
                return;
            } else {
                if (c == '\n') ++line_;
                text += c;
                ++i_;
            }
        }
        emit(continuation ? Kind::template_close : Kind::string, std::move(text), line);
    }

    bool regex_allowed() const {
        if (out_.empty()) return true;
        const auto& prev = out_.back();
        switch (prev.kind) {
            case Kind::ident: return keyword_before_expression(prev.text);
            case Kind::number:
            case Kind::string:
            case Kind::template_close:
            case Kind::regex: return false;
            case Kind::template_open: return true;
            case Kind::punct: return prev.text != ")" && prev.text != "]" && prev.text != "}";
        }
        return true;
    }

    bool regex() {
        std::size_t k = i_ + 1;
        bool in_class = false;
        while (k < s_.size()) {
            const char c = s_[k];
            if (c == '\n') return false;
            if (c == '\\') {
                k += 2;
                continue;
            }
            if (c == '[') in_class = true;
            else if (c == ']') in_class = false;
            else if (c == '/' && !in_class) break;
            ++k;
        }
        if (k >= s_.size()) return false;
        ++k;
        while (k < s_.size() && std::isalpha(static_cast<unsigned char>(s_[k]))) ++k;
        emit(Kind::regex, std::string(s_.substr(i_, k - i_)), line_);
        i_ = k;
        return true;
    }
};

bool is_punct(const std::vector<Token>& t, std::size_t k, std::string_view p) {
    return k < t.size() && t[k].kind == Kind::punct && t[k].text == p;
}
bool is_literal(const std::vector<Token>& t, std::size_t k) { return k < t.size() && t[k].kind == Kind::string; }

// Call forms: require('x') and import('x'); anything else inside the
// parentheses is a computed specifier.
void call_form(const std::vector<Token>& t, std::size_t k, SourceScan& out) {
    if (!is_punct(t, k + 1, "(")) return;
    if (is_literal(t, k + 2) && (is_punct(t, k + 3, ")") || is_punct(t, k + 3, ","))) {
        out.imports.push_back({t[k + 2].line, t[k + 2].text});
    } else if (!is_punct(t, k + 2, ")")) {
        out.computed_lines.push_back(t[k].line);
    }
}

// Looks for `from '<specifier>'` closing an import/export declaration.
void from_clause(const std::vector<Token>& t, std::size_t k, SourceScan& out) {
    static const std::unordered_set<std::string_view> kNoFrom{
        "function", "class", "const", "let", "var", "default", "async", "interface",
        "enum", "abstract", "declare", "namespace", "module"};
    if (k + 1 < t.size() && t[k + 1].kind == Kind::ident && kNoFrom.count(t[k + 1].text)) return;
    int depth = 0;
    for (std::size_t j = k + 1; j < t.size(); ++j) {
        const auto& tok = t[j];
        if (tok.kind == Kind::punct) {
            if (tok.text == "{" || tok.text == "(" || tok.text == "[") ++depth;
            else if (tok.text == "}" || tok.text == ")" || tok.text == "]") {
                if (--depth < 0) return;
            } else if (depth == 0 && (tok.text == ";" || tok.text == "=")) {
                return;
            }
        } else if (tok.kind == Kind::ident && depth == 0) {
            if (tok.text == "from" && is_literal(t, j + 1)) {
                out.imports.push_back({t[j + 1].line, t[j + 1].text});
                return;
            }
            if (tok.text == "import" || tok.text == "export") return;
        } else if (tok.kind == Kind::string && depth == 0) {
            return;
        }
    }
}

const std::unordered_set<std::string>& builtin_set() {
    static const std::unordered_set<std::string> names = [] {
        std::unordered_set<std::string> out;
        std::istringstream in{std::string(builtin_modules_text())};
        std::string line;
        while (std::getline(in, line)) {
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            auto e = line.find_last_not_of(" \t\r");
            out.insert(line.substr(b, e - b + 1));
        }
        return out;
    }();
    return names;
}

}  // namespace

SourceScan scan_source(std::string_view source) {
    const auto t = Lexer(source).run();
    SourceScan out;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k].kind != Kind::ident) continue;
        if (k > 0 && is_punct(t, k - 1, ".")) continue;  // member access: x.require(), import.meta
        if (t[k].text == "require") {
            call_form(t, k, out);
        } else if (t[k].text == "import") {
            if (is_punct(t, k + 1, "(")) {
                call_form(t, k, out);
            } else if (is_literal(t, k + 1)) {
                out.imports.push_back({t[k + 1].line, t[k + 1].text});
            } else if (!is_punct(t, k + 1, ".")) {
                from_clause(t, k, out);
            }
        } else if (t[k].text == "export") {
            from_clause(t, k, out);
        }
    }
    return out;
}

bool is_builtin(std::string_view specifier) {
    if (specifier.substr(0, 5) == "node:") return true;
    auto first = specifier.substr(0, specifier.find('/'));
    return builtin_set().count(std::string(first)) > 0;
}

std::optional<std::string> package_of(std::string_view spec) {
    if (spec.empty() || spec.front() == '.' || spec.front() == '/' || spec.front() == '#' || spec.front() == '\\') {
        return std::nullopt;
    }
    if (spec.find(':') != std::string_view::npos) return std::nullopt;  // node:, URLs, drive letters
    if (spec.find_first_of(" \t\n") != std::string_view::npos) return std::nullopt;
    if (is_builtin(spec)) return std::nullopt;
    if (spec.front() == '@') {
        auto slash = spec.find('/');
        if (slash == std::string_view::npos || slash == 1 || slash + 1 >= spec.size()) return std::nullopt;
        auto end = spec.find('/', slash + 1);
        return std::string(spec.substr(0, end));
    }
    return std::string(spec.substr(0, spec.find('/')));
}

std::set<std::string> ImportScan::names() const {
    std::set<std::string> out;
    for (const auto& [name, sites] : packages) out.insert(name);
    return out;
}

ImportScan scan_imports(const std::filesystem::path& source_root, const ScanOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(source_root, ec)) {
        throw IoError(fmt::format("source root '{}' is not a directory", source_root.string()));
    }

    std::vector<fs::path> files;
    fs::recursive_directory_iterator it(source_root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError(fmt::format("cannot list '{}': {}", source_root.string(), ec.message()));
    for (auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
        if (ec) break;
        const auto& entry = *it;
        const auto name = entry.path().filename().string();
        if (entry.is_directory(ec)) {
            if (name == "node_modules" || (!name.empty() && name.front() == '.')) it.disable_recursion_pending();
            continue;
        }
        const auto ext = entry.path().extension().string();
        if (std::find(options.extensions.begin(), options.extensions.end(), ext) != options.extensions.end()) {
            files.push_back(entry.path());
        }
    }

    std::vector<std::pair<std::string, fs::path>> ordered;
    for (const auto& f : files) ordered.emplace_back(fs::relative(f, source_root).generic_string(), f);
    std::sort(ordered.begin(), ordered.end());

    ImportScan scan;
    for (const auto& [rel, path] : ordered) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        if (!in || !(buf << in.rdbuf())) {
            scan.warnings.push_back(fmt::format("cannot read '{}'; skipped", rel));
            continue;
        }
        const auto result = scan_source(buf.str());
        for (const auto& imp : result.imports) {
            if (auto pkg = package_of(imp.specifier)) scan.packages[*pkg].push_back({rel, imp.line, imp.specifier});
        }
        for (auto line : result.computed_lines) {
            scan.notices.push_back(fmt::format("{}:{}: computed module specifier ignored", rel, line));
        }
    }
    return scan;
}

}  // namespace depwatch::imports
