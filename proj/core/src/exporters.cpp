#include "ocindex/exporters.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ocindex/csv.hpp"
#include "ocindex/gzio.hpp"

namespace ocindex {

namespace {

std::string shard_name(const ExportConfig& config, std::string_view format,
                       std::size_t shard, std::string_view ext) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05zu", shard);
    std::string name = config.dataset + "-" + std::string(format) + "-" +
                       config.run_date + "-" + buf + "." + std::string(ext);
    if (config.gzip) name += ".gz";
    return name;
}

std::string_view datatype_for_precision(DatePrecision precision) {
    switch (precision) {
        case DatePrecision::year: return vocab::xsd_gyear;
        case DatePrecision::year_month: return vocab::xsd_gyearmonth;
        case DatePrecision::day: return vocab::xsd_date;
    }
    return vocab::xsd_date;
}

/// Writes rows through a callback, cutting shards at config.shard_size.
class ShardWriter {
public:
    ShardWriter(const ExportConfig& config, std::string format, std::string ext,
                std::string header = {})
        : config_(config),
          format_(std::move(format)),
          ext_(std::move(ext)),
          header_(std::move(header)) {}

    void write(std::string_view row) {
        if (!file_ || rows_ == config_.shard_size) roll();
        file_->write(row);
        ++rows_;
    }

    std::vector<std::filesystem::path> finish() {
        if (!file_) roll();  // an empty export still produces one shard
        file_->close();
        file_.reset();
        return std::move(shards_);
    }

private:
    void roll() {
        if (file_) file_->close();
        std::string name = shard_name(config_, format_, shards_.size(), ext_);
        shards_.push_back(name);
        file_.emplace(config_.out_dir / name, config_.gzip);
        if (!header_.empty()) file_->write(header_);
        rows_ = 0;
    }

    const ExportConfig& config_;
    std::string format_;
    std::string ext_;
    std::string header_;
    std::optional<OutputFile> file_;
    std::size_t rows_ = 0;
    std::vector<std::filesystem::path> shards_;
};

nlohmann::ordered_json scholix_endpoint(const Omid& omid, const MetaStore& store) {
    nlohmann::ordered_json endpoint;
    endpoint["Identifier"] = nlohmann::ordered_json::array();
    std::optional<BibResource> resource;
    try {
        resource = store.get_resource(omid);
    } catch (const UnknownOmid&) {
    }
    if (resource && !resource->ids.empty()) {
        for (const auto& id : resource->ids) {
            nlohmann::ordered_json entry;
            entry["ID"] = id.value;
            entry["IDScheme"] = std::string(scheme_name(id.scheme));
            endpoint["Identifier"].push_back(entry);
        }
    } else {
        // Endpoint with no known external id: the OMID is the identifier.
        nlohmann::ordered_json entry;
        entry["ID"] = omid.to_string();
        entry["IDScheme"] = "omid";
        endpoint["Identifier"].push_back(entry);
    }
    endpoint["Type"] = "publication";
    if (resource && resource->pub_date)
        endpoint["PublicationDate"] = resource->pub_date->to_string();
    return endpoint;
}

}  // namespace

const std::vector<std::string> kCitationCsvHeader = {
    "oci", "citing", "cited", "creation", "timespan", "author_sc", "journal_sc"};

std::vector<std::string> citation_csv_fields(const Citation& c, bool include_sources) {
    std::vector<std::string> fields = {
        c.oci.pair(),
        c.citing.to_string(),
        c.cited.to_string(),
        c.creation_date ? c.creation_date->to_string() : "",
        c.timespan ? c.timespan->to_xsd() : "",
        c.author_self ? "yes" : "no",
        c.journal_self ? "yes" : "no",
    };
    if (include_sources) {
        std::string sources;
        for (auto tag : c.sources) {
            if (!sources.empty()) sources.push_back(' ');
            sources += std::string(source_name(tag));
        }
        fields.push_back(sources);
    }
    return fields;
}

std::optional<Citation> citation_from_csv(const std::vector<std::string>& fields) {
    if (fields.size() < 7) return std::nullopt;
    Citation c;
    auto oci = Oci::parse(fields[0]);
    auto citing = Omid::parse(fields[1]);
    auto cited = Omid::parse(fields[2]);
    if (!oci || !citing || !cited) return std::nullopt;
    c.oci = *oci;
    c.citing = *citing;
    c.cited = *cited;
    if (!fields[3].empty()) {
        c.creation_date = PartialDate::parse(fields[3]);
        if (!c.creation_date) return std::nullopt;
    }
    if (!fields[4].empty()) {
        c.timespan = Timespan::parse_xsd(fields[4]);
        if (!c.timespan) return std::nullopt;
    }
    c.author_self = fields[5] == "yes";
    c.journal_self = fields[6] == "yes";
    if (fields.size() > 7 && !fields[7].empty()) {
        std::istringstream in(fields[7]);
        std::string token;
        while (in >> token)
            if (auto tag = source_from_name(token)) c.sources.insert(*tag);
    }
    return c;
}

std::vector<Triple> citation_triples(const Citation& c) {
    std::vector<Triple> triples;
    RdfTerm subject = iri(std::string(vocab::ci_ns) + c.oci.pair());
    RdfTerm type = iri(std::string(vocab::rdf_type));
    triples.push_back({subject, type, iri(std::string(vocab::cito_citation))});
    if (c.author_self)
        triples.push_back({subject, type, iri(std::string(vocab::cito_author_self))});
    if (c.journal_self)
        triples.push_back({subject, type, iri(std::string(vocab::cito_journal_self))});
    triples.push_back({subject, iri(std::string(vocab::cito_has_citing)),
                       iri(std::string(vocab::br_ns) + c.citing.digits)});
    triples.push_back({subject, iri(std::string(vocab::cito_has_cited)),
                       iri(std::string(vocab::br_ns) + c.cited.digits)});
    if (c.creation_date)
        triples.push_back(
            {subject, iri(std::string(vocab::cito_creation)),
             literal(c.creation_date->to_string(),
                     std::string(datatype_for_precision(c.creation_date->precision())))});
    if (c.timespan)
        triples.push_back({subject, iri(std::string(vocab::cito_timespan)),
                           literal(c.timespan->to_xsd(),
                                   std::string(vocab::xsd_duration))});
    return triples;
}

std::vector<std::filesystem::path> export_csv(const std::vector<Citation>& citations,
                                              const ExportConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    std::ostringstream header;
    auto header_fields = kCitationCsvHeader;
    if (config.include_sources_column) header_fields.push_back("sources");
    write_csv_row(header, header_fields);
    ShardWriter writer(config, "csv", "csv", header.str());
    for (const auto& citation : citations) {
        std::ostringstream row;
        write_csv_row(row, citation_csv_fields(citation, config.include_sources_column));
        writer.write(row.str());
    }
    auto shards = writer.finish();
    write_manifest(config.out_dir, shards);
    return shards;
}

std::vector<std::filesystem::path> export_ntriples(
    const std::vector<Citation>& citations, const ExportConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    ShardWriter writer(config, "ntriples", "nt");
    for (const auto& citation : citations)
        for (const auto& triple : citation_triples(citation))
            writer.write(triple.to_ntriples());
    auto shards = writer.finish();
    write_manifest(config.out_dir, shards);
    return shards;
}

std::vector<std::filesystem::path> export_scholix(
    const std::vector<Citation>& citations, const MetaStore& store,
    const ExportConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    std::vector<std::filesystem::path> shards;
    std::size_t shard = 0;
    for (std::size_t start = 0; start == 0 || start < citations.size();
         start += config.shard_size) {
        nlohmann::ordered_json links = nlohmann::ordered_json::array();
        std::size_t end = std::min(citations.size(), start + config.shard_size);
        for (std::size_t i = start; i < end; ++i) {
            const Citation& c = citations[i];
            nlohmann::ordered_json link;
            link["LinkPublicationDate"] = config.run_date;
            link["LinkProvider"] = nlohmann::ordered_json::array();
            nlohmann::ordered_json provider;
            provider["Name"] = config.dataset;
            link["LinkProvider"].push_back(provider);
            for (auto tag : c.sources) {
                nlohmann::ordered_json origin;
                origin["Name"] = std::string(source_name(tag));
                link["LinkProvider"].push_back(origin);
            }
            link["RelationshipType"] = {{"Name", "References"}};
            link["LicenseURL"] = std::string(vocab::license_cc0);
            link["Source"] = scholix_endpoint(c.citing, store);
            link["Target"] = scholix_endpoint(c.cited, store);
            links.push_back(link);
        }
        std::string name = shard_name(config, "scholix", shard++, "json");
        OutputFile out(config.out_dir / name, config.gzip);
        out.write(links.dump(2));
        out.write("\n");
        out.close();
        shards.push_back(name);
    }
    write_manifest(config.out_dir, shards);
    return shards;
}

std::vector<Citation> import_csv(const std::vector<std::filesystem::path>& files) {
    std::vector<Citation> citations;
    for (const auto& file : files) {
        LineReader reader(file);
        std::stringstream buffer;
        while (auto line = reader.next()) buffer << *line << '\n';
        auto header = read_csv_row(buffer);
        if (!header || header->size() < kCitationCsvHeader.size())
            throw std::runtime_error("bad citation CSV header in " + file.string());
        for (std::size_t i = 0; i < kCitationCsvHeader.size(); ++i)
            if ((*header)[i] != kCitationCsvHeader[i])
                throw std::runtime_error("bad citation CSV header in " + file.string());
        while (auto row = read_csv_row(buffer)) {
            auto citation = citation_from_csv(*row);
            if (!citation)
                throw std::runtime_error("bad citation row in " + file.string());
            citations.push_back(std::move(*citation));
        }
    }
    std::sort(citations.begin(), citations.end(),
              [](const Citation& a, const Citation& b) { return a.oci < b.oci; });
    return citations;
}

void write_manifest(const std::filesystem::path& out_dir,
                    const std::vector<std::filesystem::path>& shards) {
    nlohmann::ordered_json manifest;
    manifest["shards"] = nlohmann::ordered_json::array();
    for (const auto& shard : shards) {
        nlohmann::ordered_json entry;
        entry["file"] = shard.string();
        entry["sha256"] = sha256_hex_file(out_dir / shard);
        entry["bytes"] = std::filesystem::file_size(out_dir / shard);
        manifest["shards"].push_back(entry);
    }
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
}

}  // namespace ocindex
