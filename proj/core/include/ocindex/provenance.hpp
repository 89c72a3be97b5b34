#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocindex/index_core.hpp"
#include "ocindex/rdf.hpp"

namespace ocindex {

struct SnapshotExists : std::runtime_error {
    explicit SnapshotExists(const std::string& oci)
        : std::runtime_error("snapshot chain already exists for " + oci) {}
};

struct UnknownEntity : std::runtime_error {
    explicit UnknownEntity(const std::string& oci)
        : std::runtime_error("no provenance chain for " + oci) {}
};

/// One versioned description of a citation's status.
struct ProvenanceSnapshot {
    Oci entity_oci;
    int snapshot_number = 1;  // consecutive per entity, starting at 1
    std::chrono::system_clock::time_point generated_at;
    std::optional<std::chrono::system_clock::time_point> invalidated_at;
    std::string agent;           // IRI
    std::string primary_source;  // IRI of the source dump
    std::string location;        // per-source collection identifier
    std::optional<std::string> update_query;  // present iff number > 1

    std::string snapshot_iri() const;
};

struct DeltaDescription {
    std::vector<Triple> inserts;
    std::vector<Triple> deletes;
    std::string primary_source;
    std::string location;
};

/// SPARQL-update text for a delta (fixed INSERT DATA / DELETE DATA template).
std::string render_update_query(const DeltaDescription& delta);

/// Snapshot chains per citation. Creation and updates on one entity are
/// serialized; distinct entities can proceed concurrently.
class ProvenanceStore {
public:
    explicit ProvenanceStore(std::string agent_iri =
                                 "https://w3id.org/oc/index/prov/pa/1");

    ProvenanceSnapshot snapshot_create(const Oci& oci, const std::string& source_iri,
                                       const std::string& location);
    ProvenanceSnapshot snapshot_update(const Oci& oci, const DeltaDescription& delta);

    std::vector<ProvenanceSnapshot> chain(const Oci& oci) const;
    std::vector<ProvenanceSnapshot> all_snapshots() const;  // sorted
    std::size_t entity_count() const;

    /// Fixed timestamp for deterministic exports; live clock when unset.
    void set_clock(std::chrono::system_clock::time_point now);

    void export_csv(const std::filesystem::path& path) const;
    void export_ntriples(const std::filesystem::path& path) const;

    /// Inverse of export_csv; continues existing chains on later runs.
    static ProvenanceStore import_csv(const std::filesystem::path& path,
                                      std::string agent_iri);

    const std::string& agent() const { return agent_; }

private:
    std::chrono::system_clock::time_point now() const;

    std::string agent_;
    std::optional<std::chrono::system_clock::time_point> fixed_now_;
    std::map<Oci, std::vector<ProvenanceSnapshot>> chains_;
    mutable std::unique_ptr<std::shared_mutex> mutex_ =
        std::make_unique<std::shared_mutex>();
};

/// Collection IRI for a source ("one for each data source used").
std::string source_collection_iri(SourceTag tag);

struct Distribution {
    std::string format;      // csv | ntriples | scholix
    std::string media_type;  // derived from format when empty
    std::uintmax_t byte_size = 0;
    std::string download_url;
};

struct DatasetDescriptor {
    std::string title;
    std::string description;
    std::string publication_date;  // ISO-8601
    std::string modified_date;
    std::vector<std::string> subjects;
    std::string webpage;
    std::string sparql_endpoint;
    std::vector<Distribution> distributions;
    long citation_count = 0;
};

std::string media_type_for_format(std::string_view format);

/// VoID/DCAT description of the produced dataset, as N-Triples.
std::vector<Triple> emit_dataset_descriptor(const DatasetDescriptor& descriptor);
void write_dataset_descriptor(const DatasetDescriptor& descriptor,
                              const std::filesystem::path& path);

std::string iso8601_utc(std::chrono::system_clock::time_point tp);
std::optional<std::chrono::system_clock::time_point> parse_iso8601_utc(
    std::string_view text);

}  // namespace ocindex
