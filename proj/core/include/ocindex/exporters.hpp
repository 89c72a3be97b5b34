#pragma once

#include <filesystem>
#include <vector>

#include "ocindex/index_core.hpp"
#include "ocindex/provenance.hpp"
#include "ocindex/rdf.hpp"

namespace ocindex {

/// Shared dump settings. File naming is
/// {dataset}-{format}-{run_date}-{shard:05}.{ext}[.gz]; a manifest.json with
/// per-shard sha-256 sums is written next to the shards.
struct ExportConfig {
    std::filesystem::path out_dir;
    std::string dataset = "ocindex";
    std::string run_date = "1970-01-01";
    std::size_t shard_size = 10'000'000;  // rows / triples / links per shard
    bool gzip = false;
    bool include_sources_column = false;  // optional trailing CSV column
};

extern const std::vector<std::string> kCitationCsvHeader;

std::vector<std::string> citation_csv_fields(const Citation& citation,
                                             bool include_sources);
std::optional<Citation> citation_from_csv(const std::vector<std::string>& fields);

/// RDF triples for one citation (5 with full metadata, plus one extra type
/// triple per self-citation flag; date triples drop out when absent).
std::vector<Triple> citation_triples(const Citation& citation);

/// Returns the shard files written (relative to config.out_dir).
std::vector<std::filesystem::path> export_csv(const std::vector<Citation>& citations,
                                              const ExportConfig& config);
std::vector<std::filesystem::path> export_ntriples(
    const std::vector<Citation>& citations, const ExportConfig& config);
std::vector<std::filesystem::path> export_scholix(
    const std::vector<Citation>& citations, const MetaStore& store,
    const ExportConfig& config);

/// Reads citation CSV shards back (header checked); inverse of export_csv.
std::vector<Citation> import_csv(const std::vector<std::filesystem::path>& files);

void write_manifest(const std::filesystem::path& out_dir,
                    const std::vector<std::filesystem::path>& shards);

}  // namespace ocindex
