// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "ocindex/adapters.hpp"
#include "ocindex/api.hpp"
#include "ocindex/csv.hpp"
#include "ocindex/exporters.hpp"
#include "ocindex/gzio.hpp"
#include "ocindex/pipeline.hpp"

using namespace ocindex;
namespace fs = std::filesystem;

namespace {

struct Workspace {
    fs::path root;
    explicit Workspace(const char* name)
        : root(fs::temp_directory_path() / "ocindex-accept" / name) {
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~Workspace() { fs::remove_all(root); }
    fs::path dir(const char* name) const {
        fs::path p = root / name;
        fs::create_directories(p);
        return p;
    }
};

void write_file(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << body;
}

std::string read_all(const fs::path& path) {
    LineReader reader(path);
    std::string out;
    while (auto line = reader.next()) out += *line + "\n";
    return out;
}

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& what) {
    if (!condition) throw Failure(what);
}

// ------------------------------------------------------------- criterion 1

// A two-record ingest whose output must be set-equal to a fixed five-triple
// reference description of one citation.
void golden_citation() {
    Workspace ws("golden");

    MetaStore store;
    BibResource citing;
    citing.omid = {"br", "06101801781"};
    citing.ids = {{IdentifierScheme::doi, "10.1000/citing"}};
    citing.pub_date = PartialDate::parse("2021-03-10");
    store.seed_resource(citing);
    BibResource cited;
    cited.omid = {"br", "06180334099"};
    cited.ids = {{IdentifierScheme::doi, "10.1000/cited"}};
    cited.pub_date = PartialDate::parse("2015-03-09");
    store.seed_resource(cited);
    fs::path store_path = ws.root / "meta.store";
    store.persist(store_path);

    write_file(ws.dir("input") / "dump.json", R"([
      {"DOI": "10.1000/citing", "issued": {"date-parts": [[2021, 3, 10]]},
       "reference": [{"DOI": "10.1000/cited"}]},
      {"DOI": "10.1000/cited", "issued": {"date-parts": [[2015, 3, 9]]}}
    ])");
    run_preprocess(SourceTag::crossref, ws.root / "input",
                   ws.dir("pairs") / "crossref");

    auto result = run_index(ws.root / "pairs", store_path, ws.dir("index"),
                            "2023-05-01");
    expect(result.new_citations == 1, "expected exactly one citation");

    ExportConfig config;
    config.out_dir = ws.dir("dump");
    config.run_date = "2023-05-01";
    auto shards = run_export(ws.root / "index", store_path, "nt", config);
    expect(shards.size() == 1, "expected one shard");

    std::set<Triple> produced;
    std::istringstream in(read_all(config.out_dir / shards[0]));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto triple = parse_ntriples_line(line);
        expect(triple.has_value(), "unparseable line: " + line);
        produced.insert(*triple);
    }

    const std::string subject = "https://w3id.org/oc/index/ci/06101801781-06180334099";
    std::set<Triple> expected = {
        {iri(subject), iri(std::string(vocab::rdf_type)),
         iri("http://purl.org/spar/cito/Citation")},
        {iri(subject), iri("http://purl.org/spar/cito/hasCitingEntity"),
         iri("https://w3id.org/oc/meta/br/06101801781")},
        {iri(subject), iri("http://purl.org/spar/cito/hasCitedEntity"),
         iri("https://w3id.org/oc/meta/br/06180334099")},
        {iri(subject), iri("http://purl.org/spar/cito/hasCitationCreationDate"),
         literal("2021-03-10", "http://www.w3.org/2001/XMLSchema#date")},
        {iri(subject), iri("http://purl.org/spar/cito/hasCitationTimeSpan"),
         literal("P6Y0M1D", "http://www.w3.org/2001/XMLSchema#duration")},
    };
    expect(produced == expected, "triple sets differ");
}

// ------------------------------------------------------------- criterion 2

void checksum_oracles() {
    std::mt19937 rng(101);
    auto digits = [&rng](int n) {
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng() % 10));
        return s;
    };
    long disagreements = 0;

    for (int i = 0; i < 10000; ++i) {
        std::string seven = digits(7);
        int sum = 0;
        for (int k = 0; k < 7; ++k) sum += (8 - k) * (seven[k] - '0');
        for (int check = 0; check <= 10; ++check) {
            char c = check == 10 ? 'X' : static_cast<char>('0' + check);
            bool oracle_ok = (sum + check) % 11 == 0;
            bool impl_ok = validate_syntax(
                {IdentifierScheme::issn, seven.substr(0, 4) + "-" + seven.substr(4) + c});
            if (oracle_ok != impl_ok) ++disagreements;
        }
    }

    for (int i = 0; i < 10000; ++i) {
        std::string nine = digits(9);
        int sum = 0;
        for (int k = 0; k < 9; ++k) sum += (10 - k) * (nine[k] - '0');
        for (int check = 0; check <= 10; ++check) {
            char c = check == 10 ? 'X' : static_cast<char>('0' + check);
            bool oracle_ok = (sum + check) % 11 == 0;
            if (oracle_ok != validate_syntax({IdentifierScheme::isbn, nine + c}))
                ++disagreements;
        }
    }

    for (int i = 0; i < 10000; ++i) {
        std::string twelve = "978" + digits(9);
        int sum = 0;
        for (int k = 0; k < 12; ++k) sum += (k % 2 == 0 ? 1 : 3) * (twelve[k] - '0');
        for (int check = 0; check <= 9; ++check) {
            bool oracle_ok = (sum + check) % 10 == 0;  // 13th digit weight is 1
            if (oracle_ok != validate_syntax({IdentifierScheme::isbn,
                                              twelve + static_cast<char>('0' + check)}))
                ++disagreements;
        }
    }

    for (int i = 0; i < 10000; ++i) {
        std::string fifteen = digits(15);
        int total = 0;
        for (char ch : fifteen) total = (total + (ch - '0')) * 2;
        int want = (12 - total % 11) % 11;
        for (int check = 0; check <= 10; ++check) {
            char c = check == 10 ? 'X' : static_cast<char>('0' + check);
            std::string sixteen = fifteen + c;
            std::string hyph = sixteen.substr(0, 4) + "-" + sixteen.substr(4, 4) + "-" +
                               sixteen.substr(8, 4) + "-" + sixteen.substr(12, 4);
            if ((check == want) != validate_syntax({IdentifierScheme::orcid, hyph}))
                ++disagreements;
        }
    }
    expect(disagreements == 0,
           std::to_string(disagreements) + " checksum disagreements");
}

// ------------------------------------------------------------- criterion 3

void cross_source_dedup() {
    Workspace ws("dedup");

    MetaStore store;
    MetadataRow citing_row;
    citing_row.ids = {{IdentifierScheme::doi, "10.1/citing"},
                      {IdentifierScheme::pmid, "100"}};
    citing_row.pub_date = PartialDate::parse("2021-03-10");
    store.resolve_or_mint(citing_row);
    MetadataRow cited_row;
    cited_row.ids = {{IdentifierScheme::doi, "10.1/cited"},
                     {IdentifierScheme::pmid, "200"}};
    cited_row.pub_date = PartialDate::parse("2015-03-09");
    store.resolve_or_mint(cited_row);
    fs::path store_path = ws.root / "meta.store";
    store.persist(store_path);

    write_file(ws.dir("pairs") / "crossref" / "pairs-00000.csv",
               "citing,cited\ndoi:10.1/citing,doi:10.1/cited\n");
    write_file(ws.dir("pairs") / "nih_occ" / "pairs-00000.csv",
               "citing,cited\npmid:100,pmid:200\n");

    auto result = run_index(ws.root / "pairs", store_path, ws.dir("index"),
                            "2023-05-01");
    expect(result.pairs_read == 2, "expected two input pairs");
    expect(result.new_citations == 1, "expected one new citation");
    expect(result.source_extensions == 1, "expected one source extension");
    expect(result.unresolved == 0, "expected no unresolved pairs");

    auto citations = load_citation_table(ws.root / "index");
    expect(citations.size() == 1, "citation table must hold one row");
    expect(citations[0].sources ==
               std::set<SourceTag>{SourceTag::crossref, SourceTag::nih_occ},
           "sources must be crossref+nih_occ");

    ProvenanceStore prov = ProvenanceStore::import_csv(
        ws.root / "index" / "prov.csv", "https://w3id.org/oc/index/prov/pa/1");
    expect(prov.entity_count() == 1, "one provenance chain expected");
    auto chain = prov.chain(citations[0].oci);
    expect(chain.size() == 2, "expected create + extension snapshots");
    expect(!chain[0].update_query.has_value(), "snapshot 1 has no update query");
    expect(chain[1].update_query.has_value(), "snapshot 2 carries the delta");
    expect(chain[1].update_query->find("INSERT DATA") != std::string::npos,
           "delta must be an insert");
}

// ------------------------------------------------------------- criterion 4

void idempotence() {
    Workspace ws("idem");
    constexpr int kWorks = 2000;
    constexpr int kPairs = 100000;

    std::ostringstream metadata;
    write_csv_row(metadata, kMetadataCsvHeader);
    for (int i = 0; i < kWorks; ++i) {
        MetadataRow row;
        row.source = SourceTag::crossref;
        row.ids = {{IdentifierScheme::doi, "10.9/w" + std::to_string(i)}};
        row.pub_date = PartialDate{2000 + i % 22, 1 + i % 12, 1 + i % 28};
        write_csv_row(metadata, metadata_csv_fields(row));
    }
    write_file(ws.dir("metadata") / "metadata-00000.csv", metadata.str());

    std::mt19937 rng(211);
    std::ostringstream pairs;
    write_csv_row(pairs, kPairCsvHeader);
    for (int i = 0; i < kPairs; ++i) {
        int a = static_cast<int>(rng() % kWorks);
        int b = static_cast<int>(rng() % kWorks);
        if (a == b) b = (b + 1) % kWorks;
        write_csv_row(pairs, {"doi:10.9/w" + std::to_string(a),
                              "doi:10.9/w" + std::to_string(b)});
    }
    write_file(ws.dir("pairs") / "crossref" / "pairs-00000.csv", pairs.str());

    fs::path store_path = ws.root / "meta.store";
    auto meta1 = run_meta(ws.root / "metadata", store_path, "060");
    expect(meta1.mints == kWorks, "first pass must mint every work");
    auto index1 = run_index(ws.root / "pairs", store_path, ws.dir("index"),
                            "2023-05-01");
    expect(index1.new_citations > 0, "first pass must create citations");

    auto export_all = [&](const char* name) {
        fs::path out = ws.dir(name);
        std::vector<std::string> hashes;
        for (const char* format : {"csv", "nt", "scholix"}) {
            ExportConfig config;
            config.out_dir = out / format;
            config.run_date = "2023-05-01";
            config.gzip = true;
            config.include_sources_column = true;
            for (const auto& shard :
                 run_export(ws.root / "index", store_path, format, config))
                hashes.push_back(sha256_hex_file(config.out_dir / shard));
        }
        return hashes;
    };
    auto dumps1 = export_all("exp1");

    auto meta2 = run_meta(ws.root / "metadata", store_path, "060");
    expect(meta2.mints == 0, "second pass must mint nothing");
    expect(meta2.merges == 0, "second pass must merge nothing");
    auto index2 = run_index(ws.root / "pairs", store_path, ws.dir("index"),
                            "2023-05-01");
    expect(index2.new_citations == 0, "second pass must add no citations");
    expect(index2.source_extensions == 0, "second pass must extend nothing");

    auto dumps2 = export_all("exp2");
    expect(dumps1 == dumps2, "dump checksums differ between passes");
    expect(!dumps1.empty(), "no dumps were produced");
}

// ------------------------------------------------------------- criterion 5

void coverage_arithmetic() {
    auto cite = [](const char* a, const char* b, std::set<SourceTag> sources) {
        Citation c;
        c.citing = {"br", a};
        c.cited = {"br", b};
        c.oci = make_oci(c.citing, c.cited);
        c.sources = std::move(sources);
        return c;
    };
    using S = SourceTag;
    std::vector<Citation> fixture = {
        cite("0601", "0602", {S::crossref}),
        cite("0601", "0603", {S::crossref}),
        cite("0601", "0604", {S::crossref, S::nih_occ}),
        cite("0602", "0603", {S::crossref, S::nih_occ, S::openaire}),
        cite("0602", "0604", {S::nih_occ}),
        cite("0603", "0604", {S::datacite}),
        cite("0603", "0605", {S::datacite, S::jalc}),
        cite("0604", "0605", {S::jalc}),
        cite("0605", "0601", {S::openaire}),
    };
    CoverageReport report = coverage_stats(fixture);
    expect(report.grand_total == 9, "grand total");
    expect(report.combinations.at({S::crossref}) == 2, "crossref-only cell");
    expect(report.combinations.at({S::crossref, S::nih_occ}) == 1, "cr+nih cell");
    expect(report.combinations.at({S::crossref, S::nih_occ, S::openaire}) == 1,
           "triple cell");
    expect(report.combinations.at({S::nih_occ}) == 1, "nih-only cell");
    expect(report.combinations.at({S::datacite}) == 1, "datacite-only cell");
    expect(report.combinations.at({S::datacite, S::jalc}) == 1, "dc+jalc cell");
    expect(report.combinations.at({S::jalc}) == 1, "jalc-only cell");
    expect(report.combinations.at({S::openaire}) == 1, "openaire-only cell");

    long partition_sum = 0;
    for (const auto& [combo, count] : report.combinations) partition_sum += count;
    expect(partition_sum == report.grand_total, "combinations must partition");

    for (S tag : {S::crossref, S::nih_occ, S::datacite, S::openaire, S::jalc}) {
        long total = report.totals.count(tag) ? report.totals.at(tag) : 0;
        long exclusive = report.exclusives.count(tag) ? report.exclusives.at(tag) : 0;
        long shared = 0;
        for (const auto& [combo, count] : report.combinations)
            if (combo.size() > 1 && combo.count(tag)) shared += count;
        expect(exclusive + shared == total,
               "exclusive+shared != total for " + std::string(source_name(tag)));
    }
    expect(report.totals.at(S::crossref) == 4, "crossref total");
    expect(report.exclusives.at(S::crossref) == 2, "crossref exclusive");
}

// ------------------------------------------------------------- criterion 6

void timespan_roundtrip() {
    std::mt19937 rng(307);
    long failures = 0;
    for (int i = 0; i < 10000; ++i) {
        auto pick = [&rng] {
            PartialDate d;
            d.year = 1800 + static_cast<int>(rng() % 400);
            d.month = 1 + static_cast<int>(rng() % 12);
            d.day = 1 + static_cast<int>(rng() % days_in_month(d.year, *d.month));
            return d;
        };
        PartialDate citing = pick();
        PartialDate cited = pick();
        Timespan span = compute_timespan(citing, cited);
        if (add_timespan(cited, span) != citing) ++failures;
        // The serialized form must also survive reparsing.
        auto reparsed = Timespan::parse_xsd(span.to_xsd());
        if (!reparsed || add_timespan(cited, *reparsed) != citing) ++failures;
    }
    expect(failures == 0, std::to_string(failures) + " round-trip failures");
}

// ------------------------------------------------------------- criterion 7

void api_symmetry() {
    constexpr int kNodes = 1000;
    constexpr int kEdges = 5000;
    std::mt19937 rng(401);
    std::set<std::pair<int, int>> edges;
    while (static_cast<int>(edges.size()) < kEdges) {
        int a = static_cast<int>(rng() % kNodes);
        int b = static_cast<int>(rng() % kNodes);
        if (a != b) edges.insert({a, b});
    }
    auto digits = [](int node) { return "060" + std::to_string(10000 + node); };
    std::vector<Citation> citations;
    std::map<int, std::set<int>> out_truth, in_truth;
    for (const auto& [a, b] : edges) {
        Citation c;
        c.citing = {"br", digits(a)};
        c.cited = {"br", digits(b)};
        c.oci = make_oci(c.citing, c.cited);
        c.sources = {SourceTag::crossref};
        citations.push_back(c);
        out_truth[a].insert(b);
        in_truth[b].insert(a);
    }

    IndexService service;
    service.load(ApiIndex::build(std::move(citations), nullptr));

    auto paged = [&](const std::string& endpoint, const std::string& id) {
        std::set<std::string> ocis;
        for (long offset = 0;; offset += 7) {
            auto res = service.handle(endpoint + id,
                                      "limit=7&offset=" + std::to_string(offset));
            expect(res.status == 200, "list endpoint failed for " + id);
            auto page = nlohmann::json::parse(res.body);
            if (page.empty()) break;
            for (const auto& item : page) ocis.insert(item["oci"].get<std::string>());
        }
        return ocis;
    };

    for (int node = 0; node < kNodes; ++node) {
        std::string id = "omid:br/" + digits(node);
        auto refs = paged("/references/", id);
        std::set<std::string> want_refs;
        for (int b : out_truth[node])
            want_refs.insert("oci:" + digits(node) + "-" + digits(b));
        expect(refs == want_refs, "references mismatch at node " + std::to_string(node));

        auto cites = paged("/citations/", id);
        std::set<std::string> want_cites;
        for (int a : in_truth[node])
            want_cites.insert("oci:" + digits(a) + "-" + digits(node));
        expect(cites == want_cites, "citations mismatch at node " + std::to_string(node));

        auto rc = nlohmann::json::parse(
            service.handle("/reference-count/" + id, "").body);
        auto cc = nlohmann::json::parse(
            service.handle("/citation-count/" + id, "").body);
        expect(rc["count"].get<std::size_t>() == want_refs.size(), "reference count");
        expect(cc["count"].get<std::size_t>() == want_cites.size(), "citation count");
    }
}

// ------------------------------------------------------------- criterion 8

void serializer_roundtrip() {
    std::mt19937 rng(503);
    Workspace ws("serial");
    auto random_citation = [&rng]() {
        Citation c;
        c.citing = {"br", "060" + std::to_string(100 + rng() % 800)};
        c.cited = {"br", "060" + std::to_string(1000 + rng() % 800)};
        c.oci = make_oci(c.citing, c.cited);
        if (rng() % 4 != 0)
            c.creation_date = PartialDate{1990 + static_cast<int>(rng() % 30),
                                          1 + static_cast<int>(rng() % 12),
                                          1 + static_cast<int>(rng() % 28)};
        if (rng() % 3 != 0) c.timespan = Timespan::parse_xsd("P2Y1M3D");
        c.author_self = rng() % 4 == 0;
        c.journal_self = rng() % 4 == 0;
        c.sources.insert(static_cast<SourceTag>(rng() % 5));
        return c;
    };

    // 1000 randomized sets through the CSV writer/reader pair.
    for (int trial = 0; trial < 1000; ++trial) {
        std::map<Oci, Citation> set;
        int n = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            Citation c = random_citation();
            set.emplace(c.oci, c);
        }
        std::ostringstream buffer;
        write_csv_row(buffer, kCitationCsvHeader);
        for (const auto& [oci, c] : set)
            write_csv_row(buffer, citation_csv_fields(c, false));
        std::istringstream in(buffer.str());
        auto header = read_csv_row(in);
        expect(header.has_value() && *header == kCitationCsvHeader, "header");
        std::map<Oci, Citation> back;
        while (auto row = read_csv_row(in)) {
            auto c = citation_from_csv(*row);
            expect(c.has_value(), "row failed to parse");
            back.emplace(c->oci, *c);
        }
        expect(back.size() == set.size(), "row count differs");
        for (const auto& [oci, c] : set) {
            const Citation& b = back.at(oci);
            expect(b.citing == c.citing && b.cited == c.cited &&
                       b.creation_date == c.creation_date && b.timespan == c.timespan &&
                       b.author_self == c.author_self && b.journal_self == c.journal_self,
                   "fields differ after round trip");
        }
    }

    // File-level export/import plus strict grammar validation of the RDF dump.
    std::vector<Citation> citations;
    std::set<std::string> seen;
    std::size_t expected_triples = 0;
    while (citations.size() < 500) {
        Citation c = random_citation();
        if (!seen.insert(c.oci.pair()).second) continue;
        citations.push_back(c);
        expected_triples += 3 + (c.author_self ? 1 : 0) + (c.journal_self ? 1 : 0) +
                            (c.creation_date ? 1 : 0) + (c.timespan ? 1 : 0);
    }
    std::sort(citations.begin(), citations.end(),
              [](const Citation& a, const Citation& b) { return a.oci < b.oci; });
    ExportConfig config;
    config.out_dir = ws.dir("dump");
    config.shard_size = 123;
    auto csv_shards = export_csv(citations, config);
    std::vector<fs::path> absolute;
    for (const auto& shard : csv_shards) absolute.push_back(config.out_dir / shard);
    auto back = import_csv(absolute);
    expect(back.size() == citations.size(), "file round trip row count");
    for (std::size_t i = 0; i < back.size(); ++i)
        expect(back[i].oci == citations[i].oci &&
                   back[i].creation_date == citations[i].creation_date &&
                   back[i].timespan == citations[i].timespan,
               "file round trip fields");

    std::size_t parsed_triples = 0;
    for (const auto& shard : export_ntriples(citations, config)) {
        std::istringstream in(read_all(config.out_dir / shard));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            expect(parse_ntriples_line(line).has_value(),
                   "grammar violation: " + line);
            ++parsed_triples;
        }
    }
    expect(parsed_triples == expected_triples,
           "triple count " + std::to_string(parsed_triples) + " != expected " +
               std::to_string(expected_triples));
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void()> run;
    };
    const Criterion criteria[] = {
        {"golden-citation-reproduction", golden_citation},
        {"checksum-oracles", checksum_oracles},
        {"cross-source-deduplication", cross_source_dedup},
        {"pipeline-idempotence", idempotence},
        {"coverage-arithmetic", coverage_arithmetic},
        {"timespan-round-trip", timespan_roundtrip},
        {"api-symmetry", api_symmetry},
        {"serializer-round-trip", serializer_roundtrip},
    };
    int failures = 0;
    int number = 0;
    for (const auto& criterion : criteria) {
        ++number;
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criterion.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (error.empty()) {
            std::printf("PASS %d %s (%lld ms)\n", number, criterion.name,
                        static_cast<long long>(ms));
        } else {
            std::printf("FAIL %d %s (%lld ms): %s\n", number, criterion.name,
                        static_cast<long long>(ms), error.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
