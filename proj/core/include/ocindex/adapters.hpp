#pragma once

#include <filesystem>
#include <functional>
#include <istream>

#include "ocindex/source_rows.hpp"

namespace ocindex {

using MetadataSink = std::function<void(const MetadataRow&)>;
using PairSink = std::function<void(const RawCitationPair&)>;

/// Each adapter consumes one source file (concatenated JSON records, NDJSON
/// or CSV depending on the source) and emits canonical rows. Malformed
/// records are counted in the report and skipped, never fatal.
struct SourceAdapter {
    virtual ~SourceAdapter() = default;
    virtual SourceTag tag() const = 0;
    virtual void parse(std::istream& in, const MetadataSink& metadata,
                       const PairSink& pairs, RunReport& report) const = 0;
};

const SourceAdapter& adapter_for(SourceTag tag);

/// Runs the adapter over every regular file in `input_dir` (gzip archives
/// are decompressed transparently) and writes the canonical metadata CSV,
/// pair CSV, and JSON run report into `output_dir`.
RunReport run_preprocess(SourceTag tag, const std::filesystem::path& input_dir,
                         const std::filesystem::path& output_dir);

}  // namespace ocindex
