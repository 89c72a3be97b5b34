#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ocindex/meta_store.hpp"

namespace ocindex {

/// Open Citation Identifier: the citing and cited br digit sequences joined
/// by a dash, e.g. oci:06101801781-06180334099.
struct Oci {
    std::string citing_digits;
    std::string cited_digits;

    std::string to_string() const { return "oci:" + pair(); }
    std::string pair() const { return citing_digits + "-" + cited_digits; }
    static std::optional<Oci> parse(std::string_view text);

    bool operator==(const Oci&) const = default;
    auto operator<=>(const Oci&) const = default;
};

struct WrongEntityType : std::runtime_error {
    explicit WrongEntityType(const std::string& omid)
        : std::runtime_error("oci endpoints must be br entities, got " + omid) {}
};

/// A unique first-class citation keyed by its OCI.
struct Citation {
    Oci oci;
    Omid citing;
    Omid cited;
    std::optional<PartialDate> creation_date;  // = citing resource's pub_date
    std::optional<Timespan> timespan;
    bool author_self = false;
    bool journal_self = false;
    std::set<SourceTag> sources;
};

struct CoverageReport {
    std::map<std::set<SourceTag>, long> combinations;  // disjoint partition
    std::map<SourceTag, long> totals;
    std::map<SourceTag, long> exclusives;
    long grand_total = 0;

    void merge(const CoverageReport& other);
    std::string to_json() const;
};

Oci make_oci(const Omid& citing, const Omid& cited);

/// Both endpoints resolved through the mapping, or nothing. Unresolved
/// pairs are handed to `unresolved` with a reason and never become partial
/// citations.
std::optional<std::pair<Omid, Omid>> to_omid_pair(
    const RawCitationPair& pair, const MetaStore& store,
    const std::function<void(const RawCitationPair&, std::string_view reason)>& unresolved);

std::pair<bool, bool> classify_self_citation(const BibResource& citing,
                                             const BibResource& cited);

/// Outcome of feeding one resolved pair into the index.
struct BuildDelta {
    long new_citations = 0;
    /// (oci, added source) events for pairs whose OCI already existed.
    std::vector<std::pair<Oci, SourceTag>> source_extensions;
};

/// Deduplicating citation index. Thread-safe insertion keyed on OCI;
/// metadata of an existing citation is never rewritten by later sources.
class CitationIndex {
public:
    /// Returns true if a new citation was created, false if the OCI already
    /// existed (the source tag is appended either way).
    bool add(const RawCitationPair& raw, const Omid& citing, const Omid& cited,
             const MetaStore& store, BuildDelta& delta);

    std::vector<Citation> citations() const;  // sorted by OCI
    std::optional<Citation> find(const Oci& oci) const;
    std::size_t size() const;

    void insert(const Citation& citation);  // bulk load (import path)

private:
    std::map<Oci, Citation> by_oci_;
    mutable std::unique_ptr<std::shared_mutex> mutex_ =
        std::make_unique<std::shared_mutex>();
};

CoverageReport coverage_stats(const std::vector<Citation>& citations);

}  // namespace ocindex
