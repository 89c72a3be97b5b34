#include "ocindex/adapters.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ocindex/csv.hpp"
#include "ocindex/gzio.hpp"

namespace ocindex {

namespace {

using nlohmann::json;

std::optional<ExternalId> try_normalize(IdentifierScheme scheme, const std::string& raw) {
    try {
        ExternalId id = normalize(scheme, raw);
        if (!validate_syntax(id)) return std::nullopt;
        return id;
    } catch (const MalformedIdentifier&) {
        return std::nullopt;
    }
}

// Emits a pair if legal for the source; counts the reason otherwise.
void emit_pair(const ExternalId& citing, const ExternalId& cited, SourceTag source,
               const PairSink& pairs, RunReport& report) {
    if (citing == cited) {
        ++report.skips["self_loop"];
        return;
    }
    RawCitationPair pair{citing, cited, source};
    if (!pair_schemes_legal(pair)) {
        ++report.skips["illegal_scheme_combination"];
        return;
    }
    pairs(pair);
    ++report.pairs_emitted;
}

std::optional<PartialDate> date_from_parts(const json& parts) {
    if (!parts.is_array() || parts.empty() || !parts[0].is_array() || parts[0].empty())
        return std::nullopt;
    const json& p = parts[0];
    PartialDate d;
    if (!p[0].is_number_integer()) return std::nullopt;
    d.year = p[0].get<int>();
    if (p.size() > 1 && p[1].is_number_integer()) {
        int m = p[1].get<int>();
        if (m < 1 || m > 12) return std::nullopt;
        d.month = m;
        if (p.size() > 2 && p[2].is_number_integer()) {
            int day = p[2].get<int>();
            if (day < 1 || day > days_in_month(d.year, m)) return std::nullopt;
            d.day = day;
        }
    }
    return d;
}

std::string author_name_key(std::string family, std::string given) {
    auto fold = [](std::string& s) {
        std::string out;
        for (unsigned char c : s)
            if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
        s = out;
    };
    fold(family);
    std::string initials;
    for (std::size_t i = 0; i < given.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(given[i]);
        if (std::isalpha(c) && (i == 0 || !std::isalpha(static_cast<unsigned char>(given[i - 1]))))
            initials.push_back(static_cast<char>(std::tolower(c)));
    }
    if (family.empty()) return initials;
    return family + "," + initials;
}

// Dispatches a stream of JSON records: a top-level array, an object with an
// item array under one of `containers`, or newline-delimited objects.
void for_each_json_record(std::istream& in, const std::vector<std::string>& containers,
                          RunReport& report, const std::function<void(const json&)>& fn) {
    int c = in.peek();
    while (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
        in.get();
        c = in.peek();
    }
    if (c == '[') {
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_array()) {
            ++report.skips["malformed_record"];
            return;
        }
        for (const auto& rec : doc) fn(rec);
        return;
    }
    // Try whole-document object with a known container key first.
    std::string body((std::istreambuf_iterator<char>(in)), {});
    json doc = json::parse(body, nullptr, false);
    if (doc.is_object()) {
        for (const auto& key : containers) {
            if (doc.contains(key) && doc[key].is_array()) {
                for (const auto& rec : doc[key]) fn(rec);
                return;
            }
        }
        fn(doc);  // single record document
        return;
    }
    // Newline-delimited records.
    std::istringstream lines(body);
    std::string line;
    long offset = 0;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            offset += static_cast<long>(line.size()) + 1;
            continue;
        }
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            ++report.skips["malformed_record"];
        } else {
            fn(rec);
        }
        offset += static_cast<long>(line.size()) + 1;
    }
}

std::string json_string(const json& j, const char* key) {
    if (j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
    return {};
}

// ---------------------------------------------------------------- crossref

class CrossrefAdapter : public SourceAdapter {
public:
    SourceTag tag() const override { return SourceTag::crossref; }

    void parse(std::istream& in, const MetadataSink& metadata, const PairSink& pairs,
               RunReport& report) const override {
        for_each_json_record(in, {"items", "message"}, report, [&](const json& rec) {
            handle_work(rec, metadata, pairs, report);
        });
    }

private:
    void handle_work(const json& work, const MetadataSink& metadata,
                     const PairSink& pairs, RunReport& report) const {
        if (!work.is_object()) {
            ++report.skips["malformed_record"];
            return;
        }
        auto doi = try_normalize(IdentifierScheme::doi, json_string(work, "DOI"));
        if (!doi) {
            ++report.skips["malformed_record"];
            return;
        }
        ++report.records;

        MetadataRow row;
        row.source = SourceTag::crossref;
        row.ids.push_back(*doi);
        if (work.contains("title")) {
            const json& t = work["title"];
            if (t.is_array() && !t.empty() && t[0].is_string())
                row.title = t[0].get<std::string>();
            else if (t.is_string())
                row.title = t.get<std::string>();
        }
        if (work.contains("issued") && work["issued"].contains("date-parts"))
            row.pub_date = date_from_parts(work["issued"]["date-parts"]);
        if (work.contains("ISSN") && work["ISSN"].is_array())
            for (const auto& issn : work["ISSN"])
                if (issn.is_string())
                    if (auto id = try_normalize(IdentifierScheme::issn, issn.get<std::string>()))
                        if (std::find(row.venue_ids.begin(), row.venue_ids.end(), *id) ==
                            row.venue_ids.end())
                            row.venue_ids.push_back(*id);
        if (work.contains("author") && work["author"].is_array()) {
            for (const auto& author : work["author"]) {
                if (auto orcid =
                        try_normalize(IdentifierScheme::orcid, json_string(author, "ORCID"))) {
                    row.author_keys.push_back(orcid->to_string());
                } else {
                    std::string key = author_name_key(json_string(author, "family"),
                                                      json_string(author, "given"));
                    if (!key.empty()) row.author_keys.push_back(key);
                }
            }
        }
        row.resource_type = json_string(work, "type");
        metadata(row);
        ++report.metadata_rows;

        if (work.contains("reference") && work["reference"].is_array()) {
            for (const auto& ref : work["reference"]) {
                auto cited = try_normalize(IdentifierScheme::doi, json_string(ref, "DOI"));
                if (!cited) {
                    // Only references that explicitly carry a DOI become pairs.
                    ++report.skips["reference_without_doi"];
                    continue;
                }
                emit_pair(*doi, *cited, SourceTag::crossref, pairs, report);
            }
        }
    }
};

// --------------------------------------------------------------------- nih

class NihAdapter : public SourceAdapter {
public:
    SourceTag tag() const override { return SourceTag::nih_occ; }

    void parse(std::istream& in, const MetadataSink& metadata, const PairSink& pairs,
               RunReport& report) const override {
        auto header = read_csv_row(in);
        if (!header) return;
        auto find = [&](std::string_view name) -> int {
            for (std::size_t i = 0; i < header->size(); ++i) {
                std::string h = (*header)[i];
                std::transform(h.begin(), h.end(), h.begin(), ::tolower);
                if (h == name) return static_cast<int>(i);
            }
            return -1;
        };
        int citing_col = find("citing");
        int cited_col = find("referenced");
        if (cited_col < 0) cited_col = find("cited");
        if (citing_col >= 0 && cited_col >= 0) {
            parse_citation_table(in, citing_col, cited_col, pairs, report);
            return;
        }
        int pmid_col = find("pmid");
        if (pmid_col < 0) {
            ++report.skips["malformed_record"];
            return;
        }
        parse_metadata_table(in, *header, pmid_col, find("year"), find("journal"),
                             find("title"), find("authors"), metadata, report);
    }

private:
    void parse_citation_table(std::istream& in, int citing_col, int cited_col,
                              const PairSink& pairs, RunReport& report) const {
        while (auto row = read_csv_row(in)) {
            if (static_cast<int>(row->size()) <= std::max(citing_col, cited_col)) {
                ++report.skips["malformed_record"];
                continue;
            }
            ++report.records;
            auto citing = try_normalize(IdentifierScheme::pmid, (*row)[citing_col]);
            auto cited = try_normalize(IdentifierScheme::pmid, (*row)[cited_col]);
            if (!citing || !cited) {
                ++report.skips["non_numeric_pmid"];
                continue;
            }
            emit_pair(*citing, *cited, SourceTag::nih_occ, pairs, report);
        }
    }

    void parse_metadata_table(std::istream& in, const std::vector<std::string>&,
                              int pmid_col, int year_col, int journal_col, int title_col,
                              int authors_col, const MetadataSink& metadata,
                              RunReport& report) const {
        auto cell = [](const std::vector<std::string>& row, int col) -> std::string {
            if (col < 0 || col >= static_cast<int>(row.size())) return {};
            return row[static_cast<std::size_t>(col)];
        };
        while (auto row = read_csv_row(in)) {
            ++report.records;
            auto pmid = try_normalize(IdentifierScheme::pmid, cell(*row, pmid_col));
            if (!pmid) {
                ++report.skips["non_numeric_pmid"];
                continue;
            }
            MetadataRow md;
            md.source = SourceTag::nih_occ;
            md.ids.push_back(*pmid);
            std::string title = cell(*row, title_col);
            if (!title.empty()) md.title = title;
            // iCite gives year-precision dates and abbreviated journal names only.
            std::string year = cell(*row, year_col);
            if (!year.empty())
                if (auto date = PartialDate::parse(year)) md.pub_date = date;
            std::string journal = cell(*row, journal_col);
            if (!journal.empty()) {
                std::replace(journal.begin(), journal.end(), ' ', '_');
                md.venue_keys.push_back(journal);
            }
            std::string authors = cell(*row, authors_col);
            std::istringstream names(authors);
            std::string name;
            while (std::getline(names, name, ';')) {
                auto comma = name.find(',');
                std::string key =
                    comma == std::string::npos
                        ? author_name_key(name, "")
                        : author_name_key(name.substr(0, comma), name.substr(comma + 1));
                if (!key.empty()) md.author_keys.push_back(key);
            }
            md.resource_type = "journal-article";
            metadata(md);
            ++report.metadata_rows;
        }
    }
};

// ---------------------------------------------------------------- datacite

class DataciteAdapter : public SourceAdapter {
public:
    SourceTag tag() const override { return SourceTag::datacite; }

    void parse(std::istream& in, const MetadataSink& metadata, const PairSink& pairs,
               RunReport& report) const override {
        for_each_json_record(in, {"data"}, report, [&](const json& rec) {
            handle_resource(rec, metadata, pairs, report);
        });
    }

private:
    void handle_resource(const json& outer, const MetadataSink& metadata,
                         const PairSink& pairs, RunReport& report) const {
        const json& rec = (outer.is_object() && outer.contains("attributes"))
                              ? outer["attributes"]
                              : outer;
        if (!rec.is_object()) {
            ++report.skips["malformed_record"];
            return;
        }
        std::string raw_doi = json_string(rec, "doi");
        if (raw_doi.empty() && outer.is_object()) raw_doi = json_string(outer, "id");
        auto doi = try_normalize(IdentifierScheme::doi, raw_doi);
        if (!doi) {
            ++report.skips["malformed_record"];
            return;
        }
        ++report.records;

        MetadataRow row;
        row.source = SourceTag::datacite;
        row.ids.push_back(*doi);
        if (rec.contains("titles") && rec["titles"].is_array() && !rec["titles"].empty())
            row.title = json_string(rec["titles"][0], "title");
        if (rec.contains("publicationYear") && rec["publicationYear"].is_number_integer()) {
            PartialDate d;
            d.year = rec["publicationYear"].get<int>();
            row.pub_date = d;
        }
        if (rec.contains("dates") && rec["dates"].is_array())
            for (const auto& entry : rec["dates"])
                if (json_string(entry, "dateType") == "Issued")
                    if (auto d = PartialDate::parse(json_string(entry, "date")))
                        row.pub_date = d;
        if (rec.contains("container") && rec["container"].is_object()) {
            const json& container = rec["container"];
            std::string scheme = json_string(container, "identifierType");
            std::string value = json_string(container, "identifier");
            if (scheme == "ISSN") {
                if (auto id = try_normalize(IdentifierScheme::issn, value))
                    row.venue_ids.push_back(*id);
            } else if (scheme == "ISBN") {
                if (auto id = try_normalize(IdentifierScheme::isbn, value))
                    row.venue_ids.push_back(*id);
            }
        }
        if (rec.contains("creators") && rec["creators"].is_array()) {
            for (const auto& creator : rec["creators"]) {
                bool have_orcid = false;
                if (creator.contains("nameIdentifiers") &&
                    creator["nameIdentifiers"].is_array()) {
                    for (const auto& nid : creator["nameIdentifiers"]) {
                        if (json_string(nid, "nameIdentifierScheme") != "ORCID") continue;
                        if (auto orcid = try_normalize(IdentifierScheme::orcid,
                                                       json_string(nid, "nameIdentifier"))) {
                            row.author_keys.push_back(orcid->to_string());
                            have_orcid = true;
                        }
                    }
                }
                if (!have_orcid) {
                    std::string key = author_name_key(json_string(creator, "familyName"),
                                                      json_string(creator, "givenName"));
                    if (!key.empty()) row.author_keys.push_back(key);
                }
            }
        }
        if (rec.contains("types") && rec["types"].is_object())
            row.resource_type = json_string(rec["types"], "resourceTypeGeneral");
        metadata(row);
        ++report.metadata_rows;

        if (!rec.contains("relatedIdentifiers") || !rec["relatedIdentifiers"].is_array())
            return;
        for (const auto& rel : rec["relatedIdentifiers"]) {
            std::string relation = json_string(rel, "relationType");
            bool direct = relation == "Cites" || relation == "References";
            bool inverse = relation == "IsCitedBy" || relation == "IsReferencedBy";
            if (!direct && !inverse) continue;  // not a citation relation
            if (json_string(rel, "relatedIdentifierType") != "DOI") {
                ++report.skips["non_doi_related_identifier"];
                continue;
            }
            auto other =
                try_normalize(IdentifierScheme::doi, json_string(rel, "relatedIdentifier"));
            if (!other) {
                ++report.skips["malformed_related_identifier"];
                continue;
            }
            if (direct)
                emit_pair(*doi, *other, SourceTag::datacite, pairs, report);
            else
                emit_pair(*other, *doi, SourceTag::datacite, pairs, report);
        }
    }
};

// ---------------------------------------------------------------- openaire

class ScholixAdapter : public SourceAdapter {
public:
    SourceTag tag() const override { return SourceTag::openaire; }

    void parse(std::istream& in, const MetadataSink& metadata, const PairSink& pairs,
               RunReport& report) const override {
        for_each_json_record(in, {"result"}, report, [&](const json& rec) {
            handle_link(rec, metadata, pairs, report);
        });
    }

private:
    struct Endpoint {
        std::vector<ExternalId> pair_ids;  // schemes allowed in citation links
        std::vector<ExternalId> all_ids;   // includes Handle (as URL) etc.
        std::optional<PartialDate> date;
        std::string type;
        std::string title;
    };

    static Endpoint read_endpoint(const json& block) {
        Endpoint ep;
        if (!block.is_object()) return ep;
        if (block.contains("Identifier") && block["Identifier"].is_array()) {
            for (const auto& entry : block["Identifier"]) {
                std::string scheme = json_string(entry, "IDScheme");
                std::transform(scheme.begin(), scheme.end(), scheme.begin(), ::tolower);
                std::string value = json_string(entry, "ID");
                if (scheme == "doi") {
                    if (auto id = try_normalize(IdentifierScheme::doi, value)) {
                        ep.pair_ids.push_back(*id);
                        ep.all_ids.push_back(*id);
                    }
                } else if (scheme == "pmid") {
                    if (auto id = try_normalize(IdentifierScheme::pmid, value)) {
                        ep.pair_ids.push_back(*id);
                        ep.all_ids.push_back(*id);
                    }
                } else if (scheme == "pmc" || scheme == "pmcid") {
                    if (auto id = try_normalize(IdentifierScheme::pmc, value)) {
                        ep.pair_ids.push_back(*id);
                        ep.all_ids.push_back(*id);
                    }
                } else if (scheme == "arxiv") {
                    if (auto id = try_normalize(IdentifierScheme::arxiv, value)) {
                        ep.pair_ids.push_back(*id);
                        ep.all_ids.push_back(*id);
                    }
                } else if (scheme == "handle") {
                    // Recorded as an alternate id only; never becomes a pair.
                    if (auto id = try_normalize(IdentifierScheme::url,
                                                "https://hdl.handle.net/" + value))
                        ep.all_ids.push_back(*id);
                }
            }
        }
        std::string date = json_string(block, "PublicationDate");
        if (!date.empty()) ep.date = PartialDate::parse(date);
        if (block.contains("Type") && block["Type"].is_object())
            ep.type = json_string(block["Type"], "Name");
        else
            ep.type = json_string(block, "Type");
        ep.title = json_string(block, "Title");
        return ep;
    }

    void handle_link(const json& rec, const MetadataSink& metadata, const PairSink& pairs,
                     RunReport& report) const {
        if (!rec.is_object() || !rec.contains("Source") || !rec.contains("Target")) {
            ++report.skips["malformed_record"];
            return;
        }
        ++report.records;
        std::string relation;
        if (rec.contains("RelationshipType") && rec["RelationshipType"].is_object())
            relation = json_string(rec["RelationshipType"], "Name");
        std::transform(relation.begin(), relation.end(), relation.begin(), ::tolower);
        Endpoint source = read_endpoint(rec["Source"]);
        Endpoint target = read_endpoint(rec["Target"]);

        for (const Endpoint* ep : {&source, &target}) {
            if (ep->all_ids.empty()) continue;
            MetadataRow row;
            row.source = SourceTag::openaire;
            row.ids = ep->all_ids;
            if (!ep->title.empty()) row.title = ep->title;
            row.pub_date = ep->date;
            row.resource_type = ep->type;
            metadata(row);
            ++report.metadata_rows;
        }

        if (relation != "references" && relation != "cites") {
            ++report.skips["non_citation_relation"];
            return;
        }
        if (source.pair_ids.empty() || target.pair_ids.empty()) {
            ++report.skips["unsupported_identifier"];
            return;
        }
        for (const auto& citing : source.pair_ids)
            for (const auto& cited : target.pair_ids)
                emit_pair(citing, cited, SourceTag::openaire, pairs, report);
    }
};

// -------------------------------------------------------------------- jalc

class JalcAdapter : public SourceAdapter {
public:
    SourceTag tag() const override { return SourceTag::jalc; }

    void parse(std::istream& in, const MetadataSink& metadata, const PairSink& pairs,
               RunReport& report) const override {
        for_each_json_record(in, {"data", "items"}, report, [&](const json& rec) {
            handle_record(rec, metadata, pairs, report);
        });
    }

private:
    void handle_record(const json& rec, const MetadataSink& metadata,
                       const PairSink& pairs, RunReport& report) const {
        if (!rec.is_object()) {
            ++report.skips["malformed_record"];
            return;
        }
        auto doi = try_normalize(IdentifierScheme::doi, json_string(rec, "doi"));
        if (!doi) {
            ++report.skips["malformed_record"];
            return;
        }
        ++report.records;

        MetadataRow row;
        row.source = SourceTag::jalc;
        row.ids.push_back(*doi);
        std::string title_en = json_string(rec, "title_en");
        std::string title_ja = json_string(rec, "title_ja");
        if (rec.contains("title") && rec["title"].is_object()) {
            if (title_en.empty()) title_en = json_string(rec["title"], "en");
            if (title_ja.empty()) title_ja = json_string(rec["title"], "ja");
        }
        // English title preferred, Japanese kept as the auxiliary value.
        if (!title_en.empty()) {
            row.title = title_en;
            if (!title_ja.empty()) row.title_alt = title_ja;
        } else if (!title_ja.empty()) {
            row.title = title_ja;
        }
        std::string date = json_string(rec, "publication_date");
        if (date.empty()) date = json_string(rec, "date");
        if (!date.empty()) row.pub_date = PartialDate::parse(date);
        std::string jid = json_string(rec, "jid");
        if (jid.empty()) jid = json_string(rec, "journal_id");
        if (!jid.empty())
            if (auto id = try_normalize(IdentifierScheme::jid, jid))
                row.venue_ids.push_back(*id);
        row.resource_type = json_string(rec, "type");
        if (row.resource_type.empty()) row.resource_type = "journal-article";
        metadata(row);
        ++report.metadata_rows;

        const char* list_key = rec.contains("citation_list") ? "citation_list" : "citations";
        if (!rec.contains(list_key) || !rec[list_key].is_array()) return;
        for (const auto& ref : rec[list_key]) {
            auto cited = try_normalize(IdentifierScheme::doi, json_string(ref, "doi"));
            if (!cited) {
                // JID-only references do not produce DOI-to-DOI pairs.
                ++report.skips["reference_without_doi"];
                continue;
            }
            emit_pair(*doi, *cited, SourceTag::jalc, pairs, report);
        }
    }
};

const CrossrefAdapter kCrossref;
const NihAdapter kNih;
const DataciteAdapter kDatacite;
const ScholixAdapter kScholix;
const JalcAdapter kJalc;

}  // namespace

const SourceAdapter& adapter_for(SourceTag tag) {
    switch (tag) {
        case SourceTag::crossref: return kCrossref;
        case SourceTag::nih_occ: return kNih;
        case SourceTag::datacite: return kDatacite;
        case SourceTag::openaire: return kScholix;
        case SourceTag::jalc: return kJalc;
    }
    return kCrossref;
}

RunReport run_preprocess(SourceTag tag, const std::filesystem::path& input_dir,
                         const std::filesystem::path& output_dir) {
    namespace fs = std::filesystem;
    const SourceAdapter& adapter = adapter_for(tag);
    fs::create_directories(output_dir);

    RunReport report;
    report.source = std::string(source_name(tag));

    std::ofstream metadata_out(output_dir / "metadata-00000.csv", std::ios::binary);
    std::ofstream pairs_out(output_dir / "pairs-00000.csv", std::ios::binary);
    write_csv_row(metadata_out, kMetadataCsvHeader);
    write_csv_row(pairs_out, kPairCsvHeader);

    MetadataSink metadata = [&](const MetadataRow& row) {
        write_csv_row(metadata_out, metadata_csv_fields(row));
    };
    PairSink pairs = [&](const RawCitationPair& pair) {
        write_csv_row(pairs_out, pair_csv_fields(pair));
    };

    std::vector<fs::path> files;
    if (fs::exists(input_dir))
        for (const auto& entry : fs::directory_iterator(input_dir))
            if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        // LineReader handles gzip transparently; rebuffer into a stream.
        LineReader reader(file);
        std::stringstream buffer;
        while (auto line = reader.next()) buffer << *line << '\n';
        adapter.parse(buffer, metadata, pairs, report);
    }

    std::ofstream report_out(output_dir / "report.json", std::ios::binary);
    report_out << report.to_json() << '\n';
    return report;
}

}  // namespace ocindex
