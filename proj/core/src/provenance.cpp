#include "ocindex/provenance.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ocindex/csv.hpp"

namespace ocindex {

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
    std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::optional<std::chrono::system_clock::time_point> parse_iso8601_utc(
    std::string_view text) {
    // Exactly "YYYY-MM-DDThh:mm:ssZ"; get_time alone accepts prefixes.
    if (text.size() != 20 || text[10] != 'T' || text.back() != 'Z')
        return std::nullopt;
    std::tm tm{};
    std::istringstream in{std::string(text)};
    in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    if (in.fail()) return std::nullopt;
    std::time_t t = timegm(&tm);
    return std::chrono::system_clock::from_time_t(t);
}

std::string ProvenanceSnapshot::snapshot_iri() const {
    return std::string(vocab::ci_ns) + entity_oci.pair() + "/prov/se/" +
           std::to_string(snapshot_number);
}

std::string render_update_query(const DeltaDescription& delta) {
    auto block = [](const char* keyword, const std::vector<Triple>& triples) {
        std::string out = std::string(keyword) + " DATA { ";
        for (const auto& t : triples) {
            out += t.subject.serialize() + " " + t.predicate.serialize() + " " +
                   t.object.serialize() + " . ";
        }
        out += "}";
        return out;
    };
    std::string query;
    if (!delta.deletes.empty()) query += block("DELETE", delta.deletes);
    if (!delta.inserts.empty()) {
        if (!query.empty()) query += "; ";
        query += block("INSERT", delta.inserts);
    }
    return query;
}

ProvenanceStore::ProvenanceStore(std::string agent_iri) : agent_(std::move(agent_iri)) {}

std::chrono::system_clock::time_point ProvenanceStore::now() const {
    return fixed_now_ ? *fixed_now_ : std::chrono::system_clock::now();
}

void ProvenanceStore::set_clock(std::chrono::system_clock::time_point now) {
    fixed_now_ = now;
}

ProvenanceSnapshot ProvenanceStore::snapshot_create(const Oci& oci,
                                                    const std::string& source_iri,
                                                    const std::string& location) {
    std::unique_lock lock(*mutex_);
    if (chains_.count(oci)) throw SnapshotExists(oci.to_string());
    ProvenanceSnapshot snapshot;
    snapshot.entity_oci = oci;
    snapshot.snapshot_number = 1;
    snapshot.generated_at = now();
    snapshot.agent = agent_;
    snapshot.primary_source = source_iri;
    snapshot.location = location;
    chains_[oci].push_back(snapshot);
    return snapshot;
}

ProvenanceSnapshot ProvenanceStore::snapshot_update(const Oci& oci,
                                                    const DeltaDescription& delta) {
    std::unique_lock lock(*mutex_);
    auto it = chains_.find(oci);
    if (it == chains_.end()) throw UnknownEntity(oci.to_string());
    auto stamp = now();
    ProvenanceSnapshot& current = it->second.back();
    current.invalidated_at = stamp;
    ProvenanceSnapshot next;
    next.entity_oci = oci;
    next.snapshot_number = current.snapshot_number + 1;
    next.generated_at = stamp;  // intervals stay contiguous
    next.agent = agent_;
    next.primary_source =
        delta.primary_source.empty() ? current.primary_source : delta.primary_source;
    next.location = delta.location.empty() ? current.location : delta.location;
    next.update_query = render_update_query(delta);
    it->second.push_back(next);
    return next;
}

std::vector<ProvenanceSnapshot> ProvenanceStore::chain(const Oci& oci) const {
    std::shared_lock lock(*mutex_);
    auto it = chains_.find(oci);
    if (it == chains_.end()) return {};
    return it->second;
}

std::vector<ProvenanceSnapshot> ProvenanceStore::all_snapshots() const {
    std::shared_lock lock(*mutex_);
    std::vector<ProvenanceSnapshot> out;
    for (const auto& [oci, chain] : chains_)
        out.insert(out.end(), chain.begin(), chain.end());
    return out;
}

std::size_t ProvenanceStore::entity_count() const {
    std::shared_lock lock(*mutex_);
    return chains_.size();
}

void ProvenanceStore::export_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv_row(out, {"oci", "snapshot", "created", "invalidated", "agent", "source",
                        "location", "update_query"});
    for (const auto& snapshot : all_snapshots()) {
        write_csv_row(out, {snapshot.entity_oci.pair(),
                            std::to_string(snapshot.snapshot_number),
                            iso8601_utc(snapshot.generated_at),
                            snapshot.invalidated_at ? iso8601_utc(*snapshot.invalidated_at)
                                                    : "",
                            snapshot.agent, snapshot.primary_source, snapshot.location,
                            snapshot.update_query.value_or("")});
    }
}

void ProvenanceStore::export_ntriples(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    auto dt = [](std::chrono::system_clock::time_point tp) {
        return literal(iso8601_utc(tp), std::string(vocab::xsd_datetime));
    };
    for (const auto& s : all_snapshots()) {
        RdfTerm subject = iri(s.snapshot_iri());
        RdfTerm entity = iri(std::string(vocab::ci_ns) + s.entity_oci.pair());
        out << Triple{subject, iri(std::string(vocab::rdf_type)),
                      iri(std::string(vocab::prov_entity))}
                   .to_ntriples();
        out << Triple{subject, iri(std::string(vocab::prov_specialization_of)), entity}
                   .to_ntriples();
        out << Triple{subject, iri(std::string(vocab::prov_generated_at)),
                      dt(s.generated_at)}
                   .to_ntriples();
        if (s.invalidated_at)
            out << Triple{subject, iri(std::string(vocab::prov_invalidated_at)),
                          dt(*s.invalidated_at)}
                       .to_ntriples();
        out << Triple{subject, iri(std::string(vocab::prov_attributed_to)), iri(s.agent)}
                   .to_ntriples();
        out << Triple{subject, iri(std::string(vocab::prov_primary_source)),
                      iri(s.primary_source)}
                   .to_ntriples();
        out << Triple{subject, iri(std::string(vocab::prov_at_location)),
                      iri(s.location)}
                   .to_ntriples();
        if (s.update_query)
            out << Triple{subject, iri(std::string(vocab::oco_update_query)),
                          literal(*s.update_query)}
                       .to_ntriples();
    }
}

ProvenanceStore ProvenanceStore::import_csv(const std::filesystem::path& path,
                                            std::string agent_iri) {
    ProvenanceStore store(std::move(agent_iri));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    auto header = read_csv_row(in);
    if (!header) return store;
    while (auto row = read_csv_row(in)) {
        if (row->size() != 8) throw std::runtime_error("bad provenance row in " + path.string());
        auto oci = Oci::parse((*row)[0]);
        auto generated = parse_iso8601_utc((*row)[2]);
        if (!oci || !generated)
            throw std::runtime_error("bad provenance row in " + path.string());
        ProvenanceSnapshot snapshot;
        snapshot.entity_oci = *oci;
        snapshot.snapshot_number = std::stoi((*row)[1]);
        snapshot.generated_at = *generated;
        if (!(*row)[3].empty()) snapshot.invalidated_at = parse_iso8601_utc((*row)[3]);
        snapshot.agent = (*row)[4];
        snapshot.primary_source = (*row)[5];
        snapshot.location = (*row)[6];
        if (!(*row)[7].empty()) snapshot.update_query = (*row)[7];
        store.chains_[*oci].push_back(snapshot);
    }
    for (auto& [oci, chain] : store.chains_)
        std::sort(chain.begin(), chain.end(),
                  [](const ProvenanceSnapshot& a, const ProvenanceSnapshot& b) {
                      return a.snapshot_number < b.snapshot_number;
                  });
    return store;
}

std::string source_collection_iri(SourceTag tag) {
    return "https://w3id.org/oc/index/collection/" + std::string(source_name(tag));
}

std::string media_type_for_format(std::string_view format) {
    if (format == "csv") return "text/csv";
    if (format == "ntriples" || format == "nt") return "application/n-triples";
    if (format == "scholix") return "application/json";
    return "application/octet-stream";
}

std::vector<Triple> emit_dataset_descriptor(const DatasetDescriptor& d) {
    std::vector<Triple> triples;
    std::string dataset_iri =
        d.webpage.empty() ? "https://w3id.org/oc/index/dataset" : d.webpage + "#dataset";
    RdfTerm subject = iri(dataset_iri);
    auto add = [&](std::string_view predicate, RdfTerm object) {
        triples.push_back({subject, iri(std::string(predicate)), std::move(object)});
    };
    add(vocab::rdf_type, iri(std::string(vocab::dcat_dataset)));
    add(vocab::dcterms_title, literal(d.title));
    if (!d.description.empty()) add(vocab::dcterms_description, literal(d.description));
    if (!d.publication_date.empty())
        add(vocab::dcterms_issued,
            literal(d.publication_date, std::string(vocab::xsd_datetime)));
    if (!d.modified_date.empty())
        add(vocab::dcterms_modified,
            literal(d.modified_date, std::string(vocab::xsd_datetime)));
    for (const auto& subject_kw : d.subjects)
        add(vocab::dcat_keyword, literal(subject_kw));
    if (!d.webpage.empty()) add(vocab::dcat_landing_page, iri(d.webpage));
    if (!d.sparql_endpoint.empty()) add(vocab::void_sparql, iri(d.sparql_endpoint));
    if (d.citation_count > 0)
        add(vocab::void_triples,
            literal(std::to_string(d.citation_count), std::string(vocab::xsd_integer)));

    int n = 0;
    for (const auto& dist : d.distributions) {
        std::string dist_iri = dataset_iri + "/distribution/" + std::to_string(++n);
        RdfTerm dist_subject = iri(dist_iri);
        add(vocab::dcat_distribution, iri(dist_iri));
        auto dist_add = [&](std::string_view predicate, RdfTerm object) {
            triples.push_back(
                {dist_subject, iri(std::string(predicate)), std::move(object)});
        };
        dist_add(vocab::rdf_type, iri(std::string(vocab::dcat_distribution_cls)));
        dist_add(vocab::dcterms_license, iri(std::string(vocab::license_cc0)));
        dist_add(vocab::dcat_media_type,
                 literal(dist.media_type.empty() ? media_type_for_format(dist.format)
                                                 : dist.media_type));
        dist_add(vocab::dcat_byte_size,
                 literal(std::to_string(dist.byte_size), std::string(vocab::xsd_integer)));
        if (!dist.download_url.empty())
            dist_add(vocab::dcat_download_url, iri(dist.download_url));
    }
    return triples;
}

void write_dataset_descriptor(const DatasetDescriptor& descriptor,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& triple : emit_dataset_descriptor(descriptor))
        out << triple.to_ntriples();
}

}  // namespace ocindex
