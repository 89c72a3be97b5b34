#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocindex {

/// One RDF term in N-Triples surface syntax ("<iri>" or a literal with
/// optional datatype).
struct RdfTerm {
    enum class Kind { iri, literal };
    Kind kind = Kind::iri;
    std::string value;     // IRI text or literal lexical form
    std::string datatype;  // literal datatype IRI, empty for plain

    std::string serialize() const;
    bool operator==(const RdfTerm&) const = default;
    auto operator<=>(const RdfTerm&) const = default;
};

RdfTerm iri(std::string value);
RdfTerm literal(std::string value, std::string datatype = {});

struct Triple {
    RdfTerm subject;
    RdfTerm predicate;
    RdfTerm object;

    /// "<s> <p> <o> .\n" with canonical escaping.
    std::string to_ntriples() const;
    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

/// Strict single-line N-Triples parser (IRIs and literals, no blank nodes).
std::optional<Triple> parse_ntriples_line(std::string_view line);

std::string nt_escape(std::string_view text);

// Vocabulary IRIs used across exports.
namespace vocab {
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view cito = "http://purl.org/spar/cito/";
inline constexpr std::string_view cito_citation = "http://purl.org/spar/cito/Citation";
inline constexpr std::string_view cito_author_self = "http://purl.org/spar/cito/AuthorSelfCitation";
inline constexpr std::string_view cito_journal_self = "http://purl.org/spar/cito/JournalSelfCitation";
inline constexpr std::string_view cito_has_citing = "http://purl.org/spar/cito/hasCitingEntity";
inline constexpr std::string_view cito_has_cited = "http://purl.org/spar/cito/hasCitedEntity";
inline constexpr std::string_view cito_creation = "http://purl.org/spar/cito/hasCitationCreationDate";
inline constexpr std::string_view cito_timespan = "http://purl.org/spar/cito/hasCitationTimeSpan";
inline constexpr std::string_view xsd_date = "http://www.w3.org/2001/XMLSchema#date";
inline constexpr std::string_view xsd_gyear = "http://www.w3.org/2001/XMLSchema#gYear";
inline constexpr std::string_view xsd_gyearmonth = "http://www.w3.org/2001/XMLSchema#gYearMonth";
inline constexpr std::string_view xsd_duration = "http://www.w3.org/2001/XMLSchema#duration";
inline constexpr std::string_view xsd_datetime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view ci_ns = "https://w3id.org/oc/index/ci/";
inline constexpr std::string_view br_ns = "https://w3id.org/oc/meta/br/";
inline constexpr std::string_view prov_entity = "http://www.w3.org/ns/prov#Entity";
inline constexpr std::string_view prov_generated_at = "http://www.w3.org/ns/prov#generatedAtTime";
inline constexpr std::string_view prov_invalidated_at = "http://www.w3.org/ns/prov#invalidatedAtTime";
inline constexpr std::string_view prov_specialization_of = "http://www.w3.org/ns/prov#specializationOf";
inline constexpr std::string_view prov_attributed_to = "http://www.w3.org/ns/prov#wasAttributedTo";
inline constexpr std::string_view prov_primary_source = "http://www.w3.org/ns/prov#hadPrimarySource";
inline constexpr std::string_view prov_at_location = "http://www.w3.org/ns/prov#atLocation";
inline constexpr std::string_view oco_update_query = "https://w3id.org/oc/ontology/hasUpdateQuery";
inline constexpr std::string_view index_from_source = "https://w3id.org/oc/index/vocab/fromCollection";
inline constexpr std::string_view dcat_dataset = "http://www.w3.org/ns/dcat#Dataset";
inline constexpr std::string_view dcat_distribution_cls = "http://www.w3.org/ns/dcat#Distribution";
inline constexpr std::string_view dcat_distribution = "http://www.w3.org/ns/dcat#distribution";
inline constexpr std::string_view dcat_byte_size = "http://www.w3.org/ns/dcat#byteSize";
inline constexpr std::string_view dcat_media_type = "http://www.w3.org/ns/dcat#mediaType";
inline constexpr std::string_view dcat_download_url = "http://www.w3.org/ns/dcat#downloadURL";
inline constexpr std::string_view dcat_landing_page = "http://www.w3.org/ns/dcat#landingPage";
inline constexpr std::string_view dcat_keyword = "http://www.w3.org/ns/dcat#keyword";
inline constexpr std::string_view void_sparql = "http://rdfs.org/ns/void#sparqlEndpoint";
inline constexpr std::string_view void_triples = "http://rdfs.org/ns/void#triples";
inline constexpr std::string_view dcterms_title = "http://purl.org/dc/terms/title";
inline constexpr std::string_view dcterms_description = "http://purl.org/dc/terms/description";
inline constexpr std::string_view dcterms_issued = "http://purl.org/dc/terms/issued";
inline constexpr std::string_view dcterms_modified = "http://purl.org/dc/terms/modified";
inline constexpr std::string_view dcterms_license = "http://purl.org/dc/terms/license";
inline constexpr std::string_view license_cc0 = "https://creativecommons.org/publicdomain/zero/1.0/";
}  // namespace vocab

}  // namespace ocindex
