#include "nfa/xml_parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "nfa/errors.hpp"

namespace nfa {

std::string resolve_semantic_label(const std::string& uri, const NamespaceLabelMap& ns_map) {
    if (uri.empty()) {
        raise(ErrorKind::domain_error, "namespace URI must be non-empty");
    }
    auto it = ns_map.find(uri);
    if (it != ns_map.end()) {
        return it->second;
    }
    // Fallback: last non-empty path segment of the URI.
    std::size_t end = uri.size();
    while (end > 0 && uri[end - 1] == '/') {
        --end;
    }
    std::size_t begin = uri.rfind('/', end == 0 ? std::string::npos : end - 1);
    begin = (begin == std::string::npos) ? 0 : begin + 1;
    std::vector<std::string> tokens = tokenize(std::string_view(uri).substr(begin, end - begin), StopwordSet{});
    if (tokens.empty()) {
        raise(ErrorKind::empty_label, "namespace URI '" + uri + "' yields no usable label");
    }
    // Labels must survive tokenization unchanged, so multi-token segments
    // collapse into one alphanumeric token.
    std::string label;
    for (const std::string& token : tokens) {
        label += token;
    }
    return label;
}

namespace {

struct RawAttr {
    std::string name;
    std::string value;
};

struct RawElement {
    std::string qname;
    std::vector<RawAttr> attrs;
    std::string text;
    std::vector<RawElement> children;
};

class Cursor {
public:
    Cursor(std::string_view text) : text_(text) {}

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char peek_at(std::size_t ahead) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    bool consume(std::string_view expected) {
        if (text_.substr(pos_).starts_with(expected)) {
            for (std::size_t i = 0; i < expected.size(); ++i) {
                take();
            }
            return true;
        }
        return false;
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    void skip_whitespace() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
            take();
        }
    }

    std::string position() const {
        return "line " + std::to_string(line_) + ", column " + std::to_string(col_);
    }

    [[noreturn]] void fail(const std::string& message) const {
        raise(ErrorKind::malformed_xml, message + " at " + position());
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_name_start(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool is_name_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '.' || u >= 0x80;
}

std::string read_name(Cursor& cur) {
    if (cur.eof() || !(is_name_start(cur.peek()) || cur.peek() == ':')) {
        cur.fail("expected a name");
    }
    std::string name;
    while (!cur.eof() && (is_name_char(cur.peek()) || cur.peek() == ':')) {
        name.push_back(cur.take());
    }
    std::size_t colon = name.find(':');
    if (colon != std::string::npos) {
        if (colon == 0 || colon + 1 >= name.size() || name.find(':', colon + 1) != std::string::npos) {
            cur.fail("malformed qualified name '" + name + "'");
        }
    }
    return name;
}

void append_utf8(std::string& out, unsigned long code) {
    if (code < 0x80) {
        out.push_back(static_cast<char>(code));
    } else if (code < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (code >> 6)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else if (code < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (code >> 12)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (code >> 18)));
        out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    }
}

// Expands '&...;' starting at the '&'. Only the five predefined entities and
// numeric character references are recognized.
void read_reference(Cursor& cur, std::string& out) {
    cur.take(); // '&'
    std::string body;
    while (!cur.eof() && cur.peek() != ';') {
        if (cur.peek() == '<' || std::isspace(static_cast<unsigned char>(cur.peek()))) {
            cur.fail("unterminated entity reference");
        }
        body.push_back(cur.take());
    }
    if (cur.eof()) {
        cur.fail("unterminated entity reference");
    }
    cur.take(); // ';'
    if (body == "lt") {
        out.push_back('<');
    } else if (body == "gt") {
        out.push_back('>');
    } else if (body == "amp") {
        out.push_back('&');
    } else if (body == "apos") {
        out.push_back('\'');
    } else if (body == "quot") {
        out.push_back('"');
    } else if (body.size() > 1 && body[0] == '#') {
        int base = 10;
        std::size_t start = 1;
        if (body[1] == 'x' || body[1] == 'X') {
            base = 16;
            start = 2;
        }
        unsigned long code = 0;
        if (start >= body.size()) {
            cur.fail("empty character reference");
        }
        for (std::size_t i = start; i < body.size(); ++i) {
            char c = body[i];
            int digit;
            if (c >= '0' && c <= '9') {
                digit = c - '0';
            } else if (base == 16 && c >= 'a' && c <= 'f') {
                digit = c - 'a' + 10;
            } else if (base == 16 && c >= 'A' && c <= 'F') {
                digit = c - 'A' + 10;
            } else {
                cur.fail("bad character reference '&" + body + ";'");
            }
            code = code * static_cast<unsigned long>(base) + static_cast<unsigned long>(digit);
            if (code > 0x10FFFF) {
                cur.fail("character reference out of range");
            }
        }
        append_utf8(out, code);
    } else {
        cur.fail("undefined entity '&" + body + ";'");
    }
}

void skip_comment(Cursor& cur) {
    // cursor sits right after "<!--"
    while (!cur.eof()) {
        if (cur.consume("-->")) {
            return;
        }
        cur.take();
    }
    cur.fail("unterminated comment");
}

void skip_processing_instruction(Cursor& cur) {
    while (!cur.eof()) {
        if (cur.consume("?>")) {
            return;
        }
        cur.take();
    }
    cur.fail("unterminated processing instruction");
}

void skip_doctype(Cursor& cur) {
    int bracket_depth = 0;
    while (!cur.eof()) {
        char c = cur.take();
        if (c == '[') {
            ++bracket_depth;
        } else if (c == ']') {
            --bracket_depth;
        } else if (c == '>' && bracket_depth <= 0) {
            return;
        }
    }
    cur.fail("unterminated DOCTYPE");
}

std::string read_attr_value(Cursor& cur) {
    if (cur.eof() || (cur.peek() != '"' && cur.peek() != '\'')) {
        cur.fail("expected a quoted attribute value");
    }
    char quote = cur.take();
    std::string value;
    while (!cur.eof() && cur.peek() != quote) {
        if (cur.peek() == '<') {
            cur.fail("'<' not allowed in attribute value");
        }
        if (cur.peek() == '&') {
            read_reference(cur, value);
        } else {
            value.push_back(cur.take());
        }
    }
    if (cur.eof()) {
        cur.fail("unterminated attribute value");
    }
    cur.take();
    return value;
}

// Parses one element (cursor sits at '<' of its start tag).
RawElement parse_element(Cursor& cur, int depth) {
    if (depth > 512) {
        cur.fail("element nesting too deep");
    }
    if (!cur.consume("<")) {
        cur.fail("expected '<'");
    }
    RawElement elem;
    elem.qname = read_name(cur);
    while (true) {
        cur.skip_whitespace();
        if (cur.eof()) {
            cur.fail("unterminated start tag <" + elem.qname + ">");
        }
        if (cur.consume("/>")) {
            return elem;
        }
        if (cur.consume(">")) {
            break;
        }
        RawAttr attr;
        attr.name = read_name(cur);
        cur.skip_whitespace();
        if (!cur.consume("=")) {
            cur.fail("expected '=' after attribute '" + attr.name + "'");
        }
        cur.skip_whitespace();
        attr.value = read_attr_value(cur);
        elem.attrs.push_back(std::move(attr));
    }
    // Content loop.
    while (true) {
        if (cur.eof()) {
            cur.fail("missing end tag </" + elem.qname + ">");
        }
        if (cur.starts_with("<")) {
            if (cur.consume("<!--")) {
                skip_comment(cur);
                continue;
            }
            if (cur.consume("<![CDATA[")) {
                while (!cur.eof() && !cur.starts_with("]]>")) {
                    elem.text.push_back(cur.take());
                }
                if (!cur.consume("]]>")) {
                    cur.fail("unterminated CDATA section");
                }
                continue;
            }
            if (cur.consume("<?")) {
                skip_processing_instruction(cur);
                continue;
            }
            if (cur.starts_with("</")) {
                cur.consume("</");
                std::string closing = read_name(cur);
                if (closing != elem.qname) {
                    cur.fail("end tag </" + closing + "> does not match <" + elem.qname + ">");
                }
                cur.skip_whitespace();
                if (!cur.consume(">")) {
                    cur.fail("malformed end tag </" + closing + ">");
                }
                return elem;
            }
            elem.children.push_back(parse_element(cur, depth + 1));
            continue;
        }
        if (cur.peek() == '&') {
            read_reference(cur, elem.text);
            continue;
        }
        elem.text.push_back(cur.take());
    }
}

struct ScopeFrame {
    std::map<std::string, std::string> prefix_to_uri; // "" is the default namespace
};

// read_name already rejected ill-formed colon placement.
std::pair<std::string, std::string> split_qname(const std::string& qname) {
    std::size_t colon = qname.find(':');
    if (colon == std::string::npos) {
        return {"", qname};
    }
    return {qname.substr(0, colon), qname.substr(colon + 1)};
}

class TreeBuilder {
public:
    TreeBuilder(const NamespaceLabelMap& ns_map, const StopwordSet& stopwords)
        : ns_map_(ns_map), stopwords_(stopwords) {}

    ElementNode build(const RawElement& raw) {
        scopes_.push_back({});
        scopes_.back().prefix_to_uri["xml"] = "http://www.w3.org/XML/1998/namespace";
        return convert(raw, DeweyId::root());
    }

private:
    ElementNode convert(const RawElement& raw, DeweyId dewey) {
        ScopeFrame frame;
        for (const RawAttr& attr : raw.attrs) {
            if (attr.name == "xmlns") {
                frame.prefix_to_uri[""] = attr.value;
            } else if (attr.name.starts_with("xmlns:")) {
                frame.prefix_to_uri[attr.name.substr(6)] = attr.value;
            }
        }
        scopes_.push_back(std::move(frame));

        auto [prefix, local] = split_qname(raw.qname);
        ElementNode node;
        node.dewey = std::move(dewey);
        node.tag = local;
        if (!prefix.empty()) {
            const std::string* uri = lookup(prefix);
            if (uri == nullptr) {
                raise(ErrorKind::unresolvable_prefix,
                      "prefix '" + prefix + "' on element <" + raw.qname + "> has no in-scope declaration");
            }
            node.binding = NamespaceBinding{prefix, *uri, resolve_semantic_label(*uri, ns_map_)};
        } else {
            const std::string* uri = lookup("");
            if (uri != nullptr && !uri->empty()) {
                node.binding = NamespaceBinding{"", *uri, resolve_semantic_label(*uri, ns_map_)};
            }
        }
        node.direct_tokens = tokenize(raw.text, stopwords_);
        node.children.reserve(raw.children.size());
        for (std::size_t i = 0; i < raw.children.size(); ++i) {
            node.children.push_back(convert(raw.children[i], node.dewey.child(static_cast<int>(i) + 1)));
        }
        scopes_.pop_back();
        return node;
    }

    const std::string* lookup(const std::string& prefix) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->prefix_to_uri.find(prefix);
            if (found != it->prefix_to_uri.end()) {
                return &found->second;
            }
        }
        return nullptr;
    }

    const NamespaceLabelMap& ns_map_;
    const StopwordSet& stopwords_;
    std::vector<ScopeFrame> scopes_;
};

} // namespace

ElementNode parse_document(std::string_view xml_text, const NamespaceLabelMap& ns_map,
                           const StopwordSet& stopwords) {
    Cursor cur(xml_text);
    cur.consume("\xEF\xBB\xBF"); // UTF-8 BOM
    // Prolog: XML declaration, comments, PIs, DOCTYPE.
    while (true) {
        cur.skip_whitespace();
        if (cur.eof()) {
            cur.fail("document has no root element");
        }
        if (cur.consume("<?")) {
            skip_processing_instruction(cur);
        } else if (cur.consume("<!--")) {
            skip_comment(cur);
        } else if (cur.consume("<!DOCTYPE")) {
            skip_doctype(cur);
        } else if (cur.peek() == '<') {
            break;
        } else {
            cur.fail("text content before the root element");
        }
    }
    RawElement raw = parse_element(cur, 0);
    // Trailing misc.
    while (true) {
        cur.skip_whitespace();
        if (cur.eof()) {
            break;
        }
        if (cur.consume("<?")) {
            skip_processing_instruction(cur);
        } else if (cur.consume("<!--")) {
            skip_comment(cur);
        } else {
            cur.fail("unexpected content after the root element");
        }
    }
    TreeBuilder builder(ns_map, stopwords);
    return builder.build(raw);
}

std::map<std::string, int> subtree_terms(const ElementNode& node) {
    std::map<std::string, int> counts;
    visit_document_order(node, [&](const ElementNode& n) {
        for (const std::string& term : n.direct_tokens) {
            ++counts[term];
        }
    });
    return counts;
}

std::size_t count_elements(const ElementNode& node) {
    std::size_t total = 0;
    visit_document_order(node, [&](const ElementNode&) { ++total; });
    return total;
}

NamespaceLabelMap load_namespace_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::io_error, "cannot open namespace map '" + path + "'");
    }
    NamespaceLabelMap map;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            raise(ErrorKind::io_error, "namespace map '" + path + "' line " + std::to_string(line_no) +
                                           ": expected uri<TAB>label");
        }
        std::string uri = line.substr(0, tab);
        std::string label = line.substr(tab + 1);
        while (!label.empty() && (label.back() == ' ' || label.back() == '\t')) {
            label.pop_back();
        }
        if (uri.empty() || label.empty()) {
            raise(ErrorKind::io_error, "namespace map '" + path + "' line " + std::to_string(line_no) +
                                           ": empty uri or label");
        }
        map[uri] = label;
    }
    return map;
}

} // namespace nfa
