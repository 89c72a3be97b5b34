#include "ocindex/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ocindex/csv.hpp"
#include "ocindex/gzio.hpp"

namespace ocindex {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> find_files(const fs::path& root, std::string_view stem_prefix) {
    std::vector<fs::path> files;
    if (!fs::exists(root)) return files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename().string().starts_with(stem_prefix))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::stringstream slurp(const fs::path& file) {
    LineReader reader(file);
    std::stringstream buffer;
    while (auto line = reader.next()) buffer << *line << '\n';
    return buffer;
}

// The source of a pairs shard comes from its directory name.
std::optional<SourceTag> source_of_pairs_file(const fs::path& file) {
    for (fs::path dir = file.parent_path(); !dir.empty(); dir = dir.parent_path()) {
        if (auto tag = source_from_name(dir.filename().string())) return tag;
        if (dir == dir.parent_path()) break;
    }
    return std::nullopt;
}

}  // namespace

MetaRunResult run_meta(const fs::path& metadata_dir, const fs::path& store_path,
                       const std::string& supplier_prefix) {
    MetaStore store = fs::exists(store_path) ? MetaStore::load(store_path)
                                             : MetaStore(supplier_prefix);
    std::uint64_t mints_before = store.mint_count();
    std::uint64_t merges_before = store.merge_count();

    MetaRunResult result;
    for (const auto& file : find_files(metadata_dir, "metadata-")) {
        auto buffer = slurp(file);
        auto header = read_csv_row(buffer);
        if (!header) continue;
        while (auto row = read_csv_row(buffer)) {
            auto metadata = metadata_from_csv(*row);
            if (!metadata) continue;
            store.resolve_or_mint(*metadata);
            ++result.rows;
        }
    }
    result.mints = static_cast<long>(store.mint_count() - mints_before);
    result.merges = static_cast<long>(store.merge_count() - merges_before);
    if (store_path.has_parent_path()) fs::create_directories(store_path.parent_path());
    store.persist(store_path);
    store.export_mapping_csv(store_path.string() + ".mapping.csv");
    return result;
}

IndexRunResult run_index(const fs::path& pairs_dir, const fs::path& store_path,
                         const fs::path& out_dir, const std::string& run_date) {
    MetaStore store = MetaStore::load(store_path);
    fs::create_directories(out_dir);

    CitationIndex index;
    fs::path table_path = out_dir / "citations.csv";
    if (fs::exists(table_path))
        for (const auto& citation : import_csv({table_path})) index.insert(citation);

    fs::path prov_path = out_dir / "prov.csv";
    ProvenanceStore provenance =
        fs::exists(prov_path)
            ? ProvenanceStore::import_csv(prov_path,
                                          "https://w3id.org/oc/index/prov/pa/1")
            : ProvenanceStore();
    if (!run_date.empty())
        if (auto tp = parse_iso8601_utc(run_date + "T00:00:00Z"))
            provenance.set_clock(*tp);

    std::ofstream unresolved_out(out_dir / "unresolved.csv", std::ios::binary);
    write_csv_row(unresolved_out, {"citing", "cited", "source", "reason"});
    std::ofstream delta_out(out_dir / "delta.csv", std::ios::binary);
    write_csv_row(delta_out, {"oci", "added_source", "timestamp"});

    IndexRunResult result;
    for (const auto& file : find_files(pairs_dir, "pairs-")) {
        auto source = source_of_pairs_file(file);
        if (!source) continue;
        std::string source_iri = source_collection_iri(*source);
        auto buffer = slurp(file);
        auto header = read_csv_row(buffer);
        if (!header) continue;
        while (auto row = read_csv_row(buffer)) {
            auto pair = pair_from_csv(*row, *source);
            if (!pair) continue;
            ++result.pairs_read;
            auto resolved = to_omid_pair(
                *pair, store,
                [&](const RawCitationPair& p, std::string_view reason) {
                    write_csv_row(unresolved_out,
                                  {p.citing.to_string(), p.cited.to_string(),
                                   std::string(source_name(p.source)),
                                   std::string(reason)});
                    ++result.unresolved;
                });
            if (!resolved) continue;
            BuildDelta delta;
            bool created =
                index.add(*pair, resolved->first, resolved->second, store, delta);
            Oci oci = make_oci(resolved->first, resolved->second);
            if (created) {
                if (provenance.chain(oci).empty())
                    provenance.snapshot_create(oci, source_iri,
                                               source_collection_iri(*source));
                ++result.new_citations;
            }
            for (const auto& [ext_oci, tag] : delta.source_extensions) {
                DeltaDescription description;
                description.primary_source = source_collection_iri(tag);
                description.location = source_collection_iri(tag);
                description.inserts.push_back(
                    {iri(std::string(vocab::ci_ns) + ext_oci.pair()),
                     iri(std::string(vocab::index_from_source)),
                     iri(source_collection_iri(tag))});
                auto snapshot = provenance.snapshot_update(ext_oci, description);
                write_csv_row(delta_out, {ext_oci.pair(), std::string(source_name(tag)),
                                          iso8601_utc(snapshot.generated_at)});
                ++result.source_extensions;
            }
        }
    }

    // Full rewrite of the citation table, sorted by OCI.
    std::ofstream table_out(table_path, std::ios::binary);
    auto header_fields = kCitationCsvHeader;
    header_fields.push_back("sources");
    write_csv_row(table_out, header_fields);
    for (const auto& citation : index.citations())
        write_csv_row(table_out, citation_csv_fields(citation, true));
    table_out.close();

    provenance.export_csv(prov_path);
    provenance.export_ntriples(out_dir / "prov.nt");

    std::ofstream report_out(out_dir / "report.json", std::ios::binary);
    report_out << "{\n  \"pairs_read\": " << result.pairs_read
               << ",\n  \"new_citations\": " << result.new_citations
               << ",\n  \"source_extensions\": " << result.source_extensions
               << ",\n  \"unresolved\": " << result.unresolved << "\n}\n";
    return result;
}

std::vector<Citation> load_citation_table(const fs::path& index_dir) {
    fs::path table = index_dir / "citations.csv";
    if (!fs::exists(table)) throw std::runtime_error("missing " + table.string());
    return import_csv({table});
}

std::vector<fs::path> run_export(const fs::path& index_dir, const fs::path& store_path,
                                 const std::string& format, ExportConfig config) {
    auto citations = load_citation_table(index_dir);
    std::vector<fs::path> shards;
    if (format == "csv") {
        shards = export_csv(citations, config);
    } else if (format == "nt" || format == "ntriples") {
        shards = export_ntriples(citations, config);
    } else if (format == "scholix") {
        MetaStore store = MetaStore::load(store_path);
        shards = export_scholix(citations, store, config);
    } else {
        throw std::runtime_error("unknown export format: " + format);
    }

    DatasetDescriptor descriptor;
    descriptor.title = config.dataset;
    descriptor.description = "Citation index dump produced on " + config.run_date;
    descriptor.publication_date = config.run_date + "T00:00:00Z";
    descriptor.modified_date = descriptor.publication_date;
    descriptor.subjects = {"citations", "bibliographic metadata"};
    descriptor.citation_count = static_cast<long>(citations.size());
    for (const auto& shard : shards) {
        Distribution dist;
        dist.format = format == "nt" ? "ntriples" : format;
        dist.byte_size = fs::file_size(config.out_dir / shard);
        dist.download_url = "file://" + fs::absolute(config.out_dir / shard).string();
        descriptor.distributions.push_back(dist);
    }
    write_dataset_descriptor(descriptor, config.out_dir / "descriptor.nt");
    return shards;
}

CoverageReport run_stats(const fs::path& index_dir) {
    return coverage_stats(load_citation_table(index_dir));
}

}  // namespace ocindex
