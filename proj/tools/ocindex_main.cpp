// Pipeline entry point: one subcommand per workflow stage.
//   preprocess  extract metadata + citation pairs from a source dump
//   meta        deduplicate resources and mint internal identifiers
//   index       build unique citations with provenance
//   export      emit CSV / N-Triples / Scholix dumps
//   stats       per-source coverage report
//   serve       HTTP lookup API

#include <chrono>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "ocindex/api.hpp"
#include "ocindex/pipeline.hpp"

namespace {

std::string today_utc() {
    return ocindex::iso8601_utc(std::chrono::system_clock::now()).substr(0, 10);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Citation index construction engine"};
    app.set_config("--config", "", "Key=value configuration file");
    app.require_subcommand(1);

    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--jobs", jobs, "Worker count (module-internal parallelism)");

    // preprocess
    auto* preprocess = app.add_subcommand("preprocess", "Run a source adapter");
    std::string source;
    std::string input_dir;
    std::string output_dir;
    preprocess->add_option("--source", source, "crossref|nih_occ|datacite|openaire|jalc")
        ->required();
    preprocess->add_option("--input", input_dir, "Source dump directory")->required();
    preprocess->add_option("--output", output_dir, "Canonical CSV output directory")
        ->required();

    // meta
    auto* meta = app.add_subcommand("meta", "Deduplicate resources, mint identifiers");
    std::string metadata_dir;
    std::string store_path;
    std::string prefix = "060";
    meta->add_option("--metadata", metadata_dir, "Directory of metadata CSVs")->required();
    meta->add_option("--store", store_path, "Meta store file")->required();
    meta->add_option("--prefix", prefix, "Supplier digit prefix for minted identifiers");

    // index
    auto* index = app.add_subcommand("index", "Build unique citations");
    std::string pairs_dir;
    std::string index_store;
    std::string index_out;
    std::string run_date = today_utc();
    index->add_option("--pairs", pairs_dir, "Directory with per-source pair CSVs")
        ->required();
    index->add_option("--store", index_store, "Meta store file")->required();
    index->add_option("--out", index_out, "Index output directory")->required();
    index->add_option("--run-date", run_date, "Fixed run date (YYYY-MM-DD)");

    // export
    auto* exp = app.add_subcommand("export", "Emit dump files");
    std::string exp_index;
    std::string exp_store;
    std::string exp_format;
    std::string exp_out;
    std::string exp_dataset = "ocindex";
    std::string exp_run_date = today_utc();
    std::size_t shard_size = 10'000'000;
    bool gzip = false;
    bool sources_column = false;
    exp->add_option("--index", exp_index, "Index directory (from the index step)")
        ->required();
    exp->add_option("--store", exp_store, "Meta store file (needed for scholix)");
    exp->add_option("--format", exp_format, "csv|nt|scholix")->required();
    exp->add_option("--out", exp_out, "Dump output directory")->required();
    exp->add_option("--dataset", exp_dataset, "Dataset name used in file names");
    exp->add_option("--run-date", exp_run_date, "Run date used in file names");
    exp->add_option("--shard-size", shard_size, "Rows/triples per shard");
    exp->add_flag("--gzip", gzip, "Gzip-compress shards");
    exp->add_flag("--sources-column", sources_column,
                  "Append the source set as a trailing CSV column");

    // stats
    auto* stats = app.add_subcommand("stats", "Print the coverage report");
    std::string stats_index;
    stats->add_option("--index", stats_index, "Index directory")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP lookup API");
    std::string serve_index;
    std::string mapping_file;
    int port = 8080;
    serve->add_option("--index-dir", serve_index, "Index directory")->required();
    serve->add_option("--mapping-file", mapping_file, "Meta store file for id lookups");
    serve->add_option("--port", port, "Listen port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? 0 : 2;
    }

    try {
        if (*preprocess) {
            auto tag = ocindex::source_from_name(source);
            if (!tag) {
                std::cerr << "unknown source: " << source << "\n";
                return 2;
            }
            auto report = ocindex::run_preprocess(*tag, input_dir, output_dir);
            std::cout << report.to_json() << "\n";
        } else if (*meta) {
            auto result = ocindex::run_meta(metadata_dir, store_path, prefix);
            std::cout << "{\n  \"rows\": " << result.rows
                      << ",\n  \"mints\": " << result.mints
                      << ",\n  \"merges\": " << result.merges << "\n}\n";
        } else if (*index) {
            auto result = ocindex::run_index(pairs_dir, index_store, index_out, run_date);
            std::cout << "{\n  \"pairs_read\": " << result.pairs_read
                      << ",\n  \"new_citations\": " << result.new_citations
                      << ",\n  \"source_extensions\": " << result.source_extensions
                      << ",\n  \"unresolved\": " << result.unresolved << "\n}\n";
        } else if (*exp) {
            ocindex::ExportConfig config;
            config.out_dir = exp_out;
            config.dataset = exp_dataset;
            config.run_date = exp_run_date;
            config.shard_size = shard_size;
            config.gzip = gzip;
            config.include_sources_column = sources_column;
            auto shards = ocindex::run_export(exp_index, exp_store, exp_format, config);
            for (const auto& shard : shards) std::cout << shard.string() << "\n";
        } else if (*stats) {
            std::cout << ocindex::run_stats(stats_index).to_json() << "\n";
        } else if (*serve) {
            ocindex::IndexService service;
            auto citations = ocindex::load_citation_table(serve_index);
            std::optional<ocindex::MetaStore> store;
            if (!mapping_file.empty()) store = ocindex::MetaStore::load(mapping_file);
            service.load(ocindex::ApiIndex::build(std::move(citations),
                                                  store ? &*store : nullptr));
            std::cerr << "listening on port " << port << "\n";
            if (!service.serve("0.0.0.0", port)) {
                std::cerr << "cannot bind port " << port << "\n";
                return 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
