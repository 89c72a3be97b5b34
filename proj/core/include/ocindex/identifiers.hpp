#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ocindex {

/// Closed set of persistent-identifier schemes handled by the pipeline.
enum class IdentifierScheme {
    doi,
    pmid,
    pmc,
    viaf,
    wikidata,
    wikipedia,
    ror,
    orcid,
    arxiv,
    jid,
    issn,
    isbn,
    url,
};

std::string_view scheme_name(IdentifierScheme scheme);
std::optional<IdentifierScheme> scheme_from_name(std::string_view name);

struct MalformedIdentifier : std::runtime_error {
    MalformedIdentifier(IdentifierScheme scheme, const std::string& raw);
    IdentifierScheme scheme;
};

/// A normalized identifier: scheme tag plus canonical value with no scheme
/// prefix. Canonical textual form is "scheme:value".
struct ExternalId {
    IdentifierScheme scheme;
    std::string value;

    std::string to_string() const;
    bool operator==(const ExternalId&) const = default;
    auto operator<=>(const ExternalId&) const = default;
};

/// Parses "scheme:value". The value part is normalized on the way in;
/// unknown scheme tags are rejected.
ExternalId parse_external_id(std::string_view text);

/// Coerces a raw source string to the scheme's canonical form. Idempotent.
/// Throws MalformedIdentifier when the raw value cannot be shaped.
ExternalId normalize(IdentifierScheme scheme, std::string_view raw);

/// Structural validity of an already-normalized value, including check
/// digits where the scheme defines one (ISSN, ISBN, ORCID).
bool validate_syntax(const ExternalId& id);

struct ExternalIdHash {
    std::size_t operator()(const ExternalId& id) const noexcept;
};

}  // namespace ocindex
