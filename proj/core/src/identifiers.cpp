#include "ocindex/identifiers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>

namespace ocindex {

namespace {

constexpr std::array<std::string_view, 13> kSchemeNames = {
    "doi",  "pmid",  "pmc",   "viaf", "wikidata", "wikipedia", "ror",
    "orcid", "arxiv", "jid",   "issn", "isbn",     "url",
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool strip_prefix_ci(std::string_view& s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    }
    s.remove_prefix(prefix.size());
    return true;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

std::string strip_leading_zeros(std::string_view digits) {
    std::size_t i = 0;
    while (i + 1 < digits.size() && digits[i] == '0') ++i;
    return std::string(digits.substr(i));
}

std::string digits_only(std::string_view s, std::string_view keep = "") {
    std::string out;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            keep.find(c) != std::string_view::npos)
            out.push_back(c);
        else if (c != '-' && c != ' ')
            return {};  // unexpected character
    }
    return out;
}

std::string normalize_doi(std::string_view raw, std::string_view original) {
    for (auto prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                        "http://dx.doi.org/", "doi.org/", "doi:"})
        if (strip_prefix_ci(raw, prefix)) break;
    std::string value = lower(raw);
    auto slash = value.find('/');
    if (!value.starts_with("10.") || slash == std::string::npos ||
        slash + 1 >= value.size() || slash <= 3)
        throw MalformedIdentifier(IdentifierScheme::doi, std::string(original));
    return value;
}

std::string normalize_pmid(std::string_view raw, std::string_view original) {
    strip_prefix_ci(raw, "pmid:");
    raw = trim(raw);
    if (!all_digits(raw)) throw MalformedIdentifier(IdentifierScheme::pmid, std::string(original));
    std::string value = strip_leading_zeros(raw);
    if (value == "0")  // record numbering starts at 1
        throw MalformedIdentifier(IdentifierScheme::pmid, std::string(original));
    return value;
}

std::string normalize_pmc(std::string_view raw, std::string_view original) {
    strip_prefix_ci(raw, "pmcid:");
    strip_prefix_ci(raw, "pmc:") || strip_prefix_ci(raw, "pmc");
    raw = trim(raw);
    if (!all_digits(raw)) throw MalformedIdentifier(IdentifierScheme::pmc, std::string(original));
    return "PMC" + strip_leading_zeros(raw);
}

std::string normalize_issn(std::string_view raw, std::string_view original) {
    strip_prefix_ci(raw, "issn:");
    std::string compact = digits_only(upper(raw), "X");
    if (compact.size() != 8)
        throw MalformedIdentifier(IdentifierScheme::issn, std::string(original));
    return compact.substr(0, 4) + "-" + compact.substr(4);
}

std::string normalize_isbn(std::string_view raw, std::string_view original) {
    strip_prefix_ci(raw, "isbn:");
    std::string compact = digits_only(upper(raw), "X");
    if (compact.size() != 10 && compact.size() != 13)
        throw MalformedIdentifier(IdentifierScheme::isbn, std::string(original));
    return compact;
}

std::string normalize_orcid(std::string_view raw, std::string_view original) {
    for (auto prefix : {"https://orcid.org/", "http://orcid.org/", "orcid.org/", "orcid:"})
        if (strip_prefix_ci(raw, prefix)) break;
    std::string compact = digits_only(upper(raw), "X");
    if (compact.size() != 16)
        throw MalformedIdentifier(IdentifierScheme::orcid, std::string(original));
    std::string out;
    for (std::size_t i = 0; i < 16; i += 4) {
        if (i) out.push_back('-');
        out += compact.substr(i, 4);
    }
    return out;
}

bool arxiv_valid(std::string_view v);

std::string normalize_arxiv(std::string_view raw, std::string_view original) {
    for (auto prefix : {"https://arxiv.org/abs/", "http://arxiv.org/abs/", "arxiv:"})
        if (strip_prefix_ci(raw, prefix)) break;
    std::string value = lower(trim(raw));
    if (!arxiv_valid(value))
        throw MalformedIdentifier(IdentifierScheme::arxiv, std::string(original));
    return value;
}

std::string normalize_url(std::string_view raw, std::string_view original) {
    auto colon = raw.find("://");
    if (colon == std::string_view::npos || colon == 0)
        throw MalformedIdentifier(IdentifierScheme::url, std::string(original));
    std::string value = lower(raw.substr(0, colon)) + std::string(raw.substr(colon));
    while (value.size() > colon + 3 && value.back() == '/') value.pop_back();
    return value;
}

std::string normalize_viaf(std::string_view raw, std::string_view original) {
    for (auto prefix : {"https://viaf.org/viaf/", "http://viaf.org/viaf/", "viaf:"})
        if (strip_prefix_ci(raw, prefix)) break;
    raw = trim(raw);
    while (!raw.empty() && raw.back() == '/') raw.remove_suffix(1);
    if (!all_digits(raw)) throw MalformedIdentifier(IdentifierScheme::viaf, std::string(original));
    return strip_leading_zeros(raw);
}

std::string normalize_wikidata(std::string_view raw, std::string_view original) {
    for (auto prefix : {"https://www.wikidata.org/wiki/", "https://www.wikidata.org/entity/",
                        "http://www.wikidata.org/entity/", "wikidata:"})
        if (strip_prefix_ci(raw, prefix)) break;
    std::string value = upper(trim(raw));
    if (value.size() < 2 || value[0] != 'Q' || !all_digits(std::string_view(value).substr(1)))
        throw MalformedIdentifier(IdentifierScheme::wikidata, std::string(original));
    return value;
}

std::string normalize_ror(std::string_view raw, std::string_view original) {
    for (auto prefix : {"https://ror.org/", "http://ror.org/", "ror.org/", "ror:"})
        if (strip_prefix_ci(raw, prefix)) break;
    std::string value = lower(trim(raw));
    if (value.empty()) throw MalformedIdentifier(IdentifierScheme::ror, std::string(original));
    return value;
}

std::string normalize_token(IdentifierScheme scheme, std::string_view prefix,
                            std::string_view raw, std::string_view original,
                            bool lowercase) {
    strip_prefix_ci(raw, prefix);
    std::string value(trim(raw));
    if (lowercase) value = lower(value);
    if (value.empty() || value.find_first_of(" \t\n") != std::string::npos)
        throw MalformedIdentifier(scheme, std::string(original));
    return value;
}

int char_value(char c) { return c == 'X' ? 10 : c - '0'; }

bool issn_valid(std::string_view v) {
    // NNNN-NNNC; weighted sum with weights 8..2 plus check digit, mod 11.
    if (v.size() != 9 || v[4] != '-') return false;
    int sum = 0;
    int weight = 8;
    for (std::size_t i = 0; i < 9; ++i) {
        if (i == 4) continue;
        char c = v[i];
        bool last = (i == 8);
        if (!std::isdigit(static_cast<unsigned char>(c)) && !(last && c == 'X')) return false;
        sum += (last ? char_value(c) : (c - '0') * weight--);
    }
    return sum % 11 == 0;
}

bool isbn_valid(std::string_view v) {
    if (v.size() == 10) {
        int sum = 0;
        for (std::size_t i = 0; i < 10; ++i) {
            char c = v[i];
            if (!std::isdigit(static_cast<unsigned char>(c)) && !(i == 9 && c == 'X'))
                return false;
            sum += char_value(c) * static_cast<int>(10 - i);
        }
        return sum % 11 == 0;
    }
    if (v.size() == 13) {
        if (!all_digits(v)) return false;
        int sum = 0;
        for (std::size_t i = 0; i < 13; ++i) sum += (v[i] - '0') * (i % 2 ? 3 : 1);
        return sum % 10 == 0;
    }
    return false;
}

bool orcid_valid(std::string_view v) {
    // ISO 7064 mod 11-2 over the 15 digits; final character is the check.
    if (v.size() != 19 || v[4] != '-' || v[9] != '-' || v[14] != '-') return false;
    int total = 0;
    int seen = 0;
    char check = 0;
    for (char c : v) {
        if (c == '-') continue;
        ++seen;
        if (seen == 16) {
            check = c;
            break;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        total = (total + (c - '0')) * 2;
    }
    if (seen != 16 || (!std::isdigit(static_cast<unsigned char>(check)) && check != 'X'))
        return false;
    int expected = (12 - total % 11) % 11;
    return char_value(check) == expected;
}

bool doi_valid(std::string_view v) {
    if (!v.starts_with("10.")) return false;
    auto slash = v.find('/');
    if (slash == std::string_view::npos || slash + 1 >= v.size()) return false;
    std::string_view registrant = v.substr(3, slash - 3);
    if (registrant.empty()) return false;
    for (char c : registrant)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return false;
    return true;
}

bool arxiv_valid(std::string_view v) {
    // New style NNNN.NNNNN[vN] or old style archive[.sub]/NNNNNNN[vN].
    auto version_ok = [](std::string_view tail) {
        if (tail.empty()) return true;
        if (tail[0] != 'v' || tail.size() < 2) return false;
        return all_digits(tail.substr(1));
    };
    auto dot = v.find('.');
    auto slash = v.find('/');
    if (slash == std::string_view::npos) {
        if (dot != 4) return false;
        std::string_view head = v.substr(0, 4);
        std::string_view rest = v.substr(5);
        std::size_t n = 0;
        while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n]))) ++n;
        if (n < 4 || n > 5) return false;
        return all_digits(head) && version_ok(rest.substr(n));
    }
    std::string_view archive = v.substr(0, slash);
    std::string_view rest = v.substr(slash + 1);
    if (archive.empty()) return false;
    for (char c : archive)
        if (!std::islower(static_cast<unsigned char>(c)) && c != '-' && c != '.') return false;
    if (rest.size() < 7) return false;
    return all_digits(rest.substr(0, 7)) && version_ok(rest.substr(7));
}

bool token_valid(std::string_view v) {
    return !v.empty() && v.find_first_of(" \t\n\"") == std::string_view::npos;
}

}  // namespace

std::string_view scheme_name(IdentifierScheme scheme) {
    return kSchemeNames[static_cast<std::size_t>(scheme)];
}

std::optional<IdentifierScheme> scheme_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kSchemeNames.size(); ++i)
        if (kSchemeNames[i] == name) return static_cast<IdentifierScheme>(i);
    return std::nullopt;
}

MalformedIdentifier::MalformedIdentifier(IdentifierScheme s, const std::string& raw)
    : std::runtime_error("malformed " + std::string(scheme_name(s)) +
                         " identifier: \"" + raw + "\""),
      scheme(s) {}

std::string ExternalId::to_string() const {
    return std::string(scheme_name(scheme)) + ":" + value;
}

ExternalId parse_external_id(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw MalformedIdentifier(IdentifierScheme::url, std::string(text));
    auto scheme = scheme_from_name(text.substr(0, colon));
    if (!scheme)
        throw MalformedIdentifier(IdentifierScheme::url, std::string(text));
    return normalize(*scheme, text.substr(colon + 1));
}

ExternalId normalize(IdentifierScheme scheme, std::string_view raw) {
    std::string_view trimmed = trim(raw);
    if (trimmed.empty()) throw MalformedIdentifier(scheme, std::string(raw));
    std::string value;
    switch (scheme) {
        case IdentifierScheme::doi: value = normalize_doi(trimmed, raw); break;
        case IdentifierScheme::pmid: value = normalize_pmid(trimmed, raw); break;
        case IdentifierScheme::pmc: value = normalize_pmc(trimmed, raw); break;
        case IdentifierScheme::viaf: value = normalize_viaf(trimmed, raw); break;
        case IdentifierScheme::wikidata: value = normalize_wikidata(trimmed, raw); break;
        case IdentifierScheme::wikipedia:
            value = normalize_token(scheme, "wikipedia:", trimmed, raw, false);
            break;
        case IdentifierScheme::ror: value = normalize_ror(trimmed, raw); break;
        case IdentifierScheme::orcid: value = normalize_orcid(trimmed, raw); break;
        case IdentifierScheme::arxiv: value = normalize_arxiv(trimmed, raw); break;
        case IdentifierScheme::jid:
            value = normalize_token(scheme, "jid:", trimmed, raw, true);
            break;
        case IdentifierScheme::issn: value = normalize_issn(trimmed, raw); break;
        case IdentifierScheme::isbn: value = normalize_isbn(trimmed, raw); break;
        case IdentifierScheme::url: value = normalize_url(trimmed, raw); break;
    }
    return ExternalId{scheme, std::move(value)};
}

bool validate_syntax(const ExternalId& id) {
    const std::string& v = id.value;
    switch (id.scheme) {
        case IdentifierScheme::issn: return issn_valid(v);
        case IdentifierScheme::isbn: return isbn_valid(v);
        case IdentifierScheme::orcid: return orcid_valid(v);
        case IdentifierScheme::doi: return doi_valid(v);
        case IdentifierScheme::pmid:
            return all_digits(v) && v.size() <= 8 && v[0] != '0';
        case IdentifierScheme::pmc:
            return v.size() > 3 && v.starts_with("PMC") &&
                   all_digits(std::string_view(v).substr(3)) && v[3] != '0';
        case IdentifierScheme::arxiv: return arxiv_valid(v);
        case IdentifierScheme::viaf: return all_digits(v);
        case IdentifierScheme::wikidata:
            return v.size() > 1 && v[0] == 'Q' && all_digits(std::string_view(v).substr(1));
        case IdentifierScheme::url:
            return v.find("://") != std::string::npos && token_valid(v);
        case IdentifierScheme::wikipedia:
        case IdentifierScheme::ror:
        case IdentifierScheme::jid:
            return token_valid(v);
    }
    return false;
}

std::size_t ExternalIdHash::operator()(const ExternalId& id) const noexcept {
    return std::hash<std::string>()(id.value) * 31 +
           static_cast<std::size_t>(id.scheme);
}

}  // namespace ocindex
