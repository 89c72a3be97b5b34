#include "ocindex/rdf.hpp"

#include <cctype>
#include <cstdio>

namespace ocindex {

std::string nt_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

RdfTerm iri(std::string value) { return {RdfTerm::Kind::iri, std::move(value), {}}; }

RdfTerm literal(std::string value, std::string datatype) {
    return {RdfTerm::Kind::literal, std::move(value), std::move(datatype)};
}

std::string RdfTerm::serialize() const {
    if (kind == Kind::iri) return "<" + value + ">";
    std::string out = "\"" + nt_escape(value) + "\"";
    if (!datatype.empty()) out += "^^<" + datatype + ">";
    return out;
}

std::string Triple::to_ntriples() const {
    return subject.serialize() + " " + predicate.serialize() + " " +
           object.serialize() + " .\n";
}

namespace {

void skip_ws(std::string_view& s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
}

std::optional<RdfTerm> parse_term(std::string_view& s, bool allow_literal) {
    skip_ws(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '<') {
        auto end = s.find('>');
        if (end == std::string_view::npos) return std::nullopt;
        RdfTerm term = iri(std::string(s.substr(1, end - 1)));
        s.remove_prefix(end + 1);
        return term;
    }
    if (s.front() == '"' && allow_literal) {
        std::string value;
        std::size_t i = 1;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\' && i + 1 < s.size()) {
                char n = s[i + 1];
                if (n == 'n') value.push_back('\n');
                else if (n == 'r') value.push_back('\r');
                else if (n == 't') value.push_back('\t');
                else if (n == '"') value.push_back('"');
                else if (n == '\\') value.push_back('\\');
                else return std::nullopt;
                i += 2;
            } else {
                value.push_back(s[i++]);
            }
        }
        if (i >= s.size()) return std::nullopt;
        s.remove_prefix(i + 1);
        RdfTerm term = literal(std::move(value));
        if (s.starts_with("^^<")) {
            auto end = s.find('>', 3);
            if (end == std::string_view::npos) return std::nullopt;
            term.datatype = std::string(s.substr(3, end - 3));
            s.remove_prefix(end + 1);
        }
        return term;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Triple> parse_ntriples_line(std::string_view line) {
    Triple triple;
    auto subject = parse_term(line, false);
    auto predicate = parse_term(line, false);
    auto object = parse_term(line, true);
    if (!subject || !predicate || !object) return std::nullopt;
    skip_ws(line);
    if (!line.starts_with('.')) return std::nullopt;
    line.remove_prefix(1);
    skip_ws(line);
    if (!line.empty() && line != "\r" && line != "\n" && line != "\r\n")
        return std::nullopt;
    triple.subject = *subject;
    triple.predicate = *predicate;
    triple.object = *object;
    return triple;
}

}  // namespace ocindex
