#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocindex/identifiers.hpp"
#include "ocindex/partial_date.hpp"

namespace ocindex {

enum class SourceTag { crossref, nih_occ, datacite, openaire, jalc };

std::string_view source_name(SourceTag tag);
std::optional<SourceTag> source_from_name(std::string_view name);

/// One bibliographic resource as seen by a source. All ids name the same
/// resource; author_keys mixes "orcid:..." entries with opaque name keys.
struct MetadataRow {
    std::vector<ExternalId> ids;
    std::optional<std::string> title;
    std::optional<std::string> title_alt;  // e.g. JaLC Japanese title
    std::optional<PartialDate> pub_date;
    std::vector<ExternalId> venue_ids;
    std::vector<std::string> venue_keys;  // opaque names (NIH abbreviations)
    std::vector<std::string> author_keys;
    std::string resource_type;
    SourceTag source = SourceTag::crossref;
};

/// Source-asserted citation link, pre-deduplication.
struct RawCitationPair {
    ExternalId citing;
    ExternalId cited;
    SourceTag source = SourceTag::crossref;

    bool operator==(const RawCitationPair&) const = default;
};

/// Machine-readable per-run counters, keyed by reason.
struct RunReport {
    std::string source;
    long records = 0;
    long metadata_rows = 0;
    long pairs_emitted = 0;
    std::map<std::string, long> skips;

    long pairs_skipped() const;
    void merge(const RunReport& other);
    std::string to_json() const;
};

/// Canonical tabular forms shared by every adapter.
extern const std::vector<std::string> kMetadataCsvHeader;
extern const std::vector<std::string> kPairCsvHeader;

std::vector<std::string> metadata_csv_fields(const MetadataRow& row);
std::optional<MetadataRow> metadata_from_csv(const std::vector<std::string>& fields);
std::vector<std::string> pair_csv_fields(const RawCitationPair& pair);
std::optional<RawCitationPair> pair_from_csv(const std::vector<std::string>& fields,
                                             SourceTag source);

/// Per-source legal scheme combination for a citation pair.
bool pair_schemes_legal(const RawCitationPair& pair);

}  // namespace ocindex
