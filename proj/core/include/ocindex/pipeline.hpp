#pragma once

#include <filesystem>
#include <string>

#include "ocindex/adapters.hpp"
#include "ocindex/exporters.hpp"
#include "ocindex/provenance.hpp"

namespace ocindex {

/// Resolves or mints OMIDs for every metadata CSV under `metadata_dir`
/// (recursively, files named metadata-*.csv), then persists the store and
/// its audit mapping CSV next to it.
struct MetaRunResult {
    long rows = 0;
    long mints = 0;
    long merges = 0;
};
MetaRunResult run_meta(const std::filesystem::path& metadata_dir,
                       const std::filesystem::path& store_path,
                       const std::string& supplier_prefix = "060");

/// Builds citations from pair CSVs. `pairs_dir` holds one subdirectory per
/// source tag (as written by preprocess), each with pairs-*.csv shards.
/// Re-runs continue from the citations/provenance already in `out_dir`.
struct IndexRunResult {
    long pairs_read = 0;
    long new_citations = 0;
    long source_extensions = 0;
    long unresolved = 0;
};
IndexRunResult run_index(const std::filesystem::path& pairs_dir,
                         const std::filesystem::path& store_path,
                         const std::filesystem::path& out_dir,
                         const std::string& run_date = {});

/// Reads the citation table written by run_index (citations.csv, sources
/// column included).
std::vector<Citation> load_citation_table(const std::filesystem::path& index_dir);

/// Emits one dump format plus the dataset descriptor (descriptor.nt).
std::vector<std::filesystem::path> run_export(const std::filesystem::path& index_dir,
                                              const std::filesystem::path& store_path,
                                              const std::string& format,
                                              ExportConfig config);

CoverageReport run_stats(const std::filesystem::path& index_dir);

}  // namespace ocindex
