#include "ocindex/source_rows.hpp"

#include <sstream>

#include "json.hpp"
#include "ocindex/csv.hpp"

namespace ocindex {

namespace {

constexpr std::string_view kSourceNames[] = {"crossref", "nih_occ", "datacite",
                                             "openaire", "jalc"};

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out.push_back(' ');
        out += p;
    }
    return out;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

}  // namespace

std::string_view source_name(SourceTag tag) {
    return kSourceNames[static_cast<std::size_t>(tag)];
}

std::optional<SourceTag> source_from_name(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kSourceNames); ++i)
        if (kSourceNames[i] == name) return static_cast<SourceTag>(i);
    return std::nullopt;
}

long RunReport::pairs_skipped() const {
    long total = 0;
    for (const auto& [reason, count] : skips) total += count;
    return total;
}

void RunReport::merge(const RunReport& other) {
    records += other.records;
    metadata_rows += other.metadata_rows;
    pairs_emitted += other.pairs_emitted;
    for (const auto& [reason, count] : other.skips) skips[reason] += count;
}

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["source"] = source;
    j["records"] = records;
    j["metadata_rows"] = metadata_rows;
    j["pairs_emitted"] = pairs_emitted;
    j["skips"] = nlohmann::ordered_json::object();
    for (const auto& [reason, count] : skips) j["skips"][reason] = count;
    return j.dump(2);
}

const std::vector<std::string> kMetadataCsvHeader = {
    "ids", "title", "pub_date", "venue", "authors", "type", "title_alt", "source"};
const std::vector<std::string> kPairCsvHeader = {"citing", "cited"};

std::vector<std::string> metadata_csv_fields(const MetadataRow& row) {
    std::vector<std::string> ids;
    for (const auto& id : row.ids) ids.push_back(id.to_string());
    std::vector<std::string> venue;
    for (const auto& id : row.venue_ids) venue.push_back(id.to_string());
    for (const auto& key : row.venue_keys) venue.push_back("name:" + key);
    std::optional<std::string> date;
    if (row.pub_date) date = row.pub_date->to_string();
    return {join(ids),
            row.title.value_or(""),
            date.value_or(""),
            join(venue),
            join(row.author_keys),
            row.resource_type,
            row.title_alt.value_or(""),
            std::string(source_name(row.source))};
}

std::optional<MetadataRow> metadata_from_csv(const std::vector<std::string>& fields) {
    if (fields.size() != kMetadataCsvHeader.size()) return std::nullopt;
    MetadataRow row;
    try {
        for (const auto& token : split(fields[0])) row.ids.push_back(parse_external_id(token));
    } catch (const MalformedIdentifier&) {
        return std::nullopt;
    }
    if (row.ids.empty()) return std::nullopt;
    if (!fields[1].empty()) row.title = fields[1];
    if (!fields[2].empty()) {
        row.pub_date = PartialDate::parse(fields[2]);
        if (!row.pub_date) return std::nullopt;
    }
    for (const auto& token : split(fields[3])) {
        if (token.starts_with("name:")) {
            row.venue_keys.push_back(token.substr(5));
        } else {
            try {
                row.venue_ids.push_back(parse_external_id(token));
            } catch (const MalformedIdentifier&) {
                return std::nullopt;
            }
        }
    }
    row.author_keys = split(fields[4]);
    row.resource_type = fields[5];
    if (!fields[6].empty()) row.title_alt = fields[6];
    auto src = source_from_name(fields[7]);
    if (!src) return std::nullopt;
    row.source = *src;
    return row;
}

std::vector<std::string> pair_csv_fields(const RawCitationPair& pair) {
    return {pair.citing.to_string(), pair.cited.to_string()};
}

std::optional<RawCitationPair> pair_from_csv(const std::vector<std::string>& fields,
                                             SourceTag source) {
    if (fields.size() != 2) return std::nullopt;
    try {
        RawCitationPair pair{parse_external_id(fields[0]), parse_external_id(fields[1]),
                             source};
        if (pair.citing == pair.cited) return std::nullopt;
        return pair;
    } catch (const MalformedIdentifier&) {
        return std::nullopt;
    }
}

bool pair_schemes_legal(const RawCitationPair& pair) {
    auto is = [&](IdentifierScheme a, IdentifierScheme b) {
        return pair.citing.scheme == a && pair.cited.scheme == b;
    };
    switch (pair.source) {
        case SourceTag::crossref:
        case SourceTag::datacite:
        case SourceTag::jalc:
            return is(IdentifierScheme::doi, IdentifierScheme::doi);
        case SourceTag::nih_occ:
            return is(IdentifierScheme::pmid, IdentifierScheme::pmid);
        case SourceTag::openaire: {
            auto ok = [](IdentifierScheme s) {
                return s == IdentifierScheme::doi || s == IdentifierScheme::pmc ||
                       s == IdentifierScheme::pmid || s == IdentifierScheme::arxiv;
            };
            return ok(pair.citing.scheme) && ok(pair.cited.scheme);
        }
    }
    return false;
}

}  // namespace ocindex
