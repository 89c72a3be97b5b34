#include "ocindex/index_core.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"

namespace ocindex {

std::optional<Oci> Oci::parse(std::string_view text) {
    if (text.starts_with("oci:")) text.remove_prefix(4);
    auto dash = text.find('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 >= text.size())
        return std::nullopt;
    Oci oci{std::string(text.substr(0, dash)), std::string(text.substr(dash + 1))};
    for (const auto& part : {oci.citing_digits, oci.cited_digits})
        for (char c : part)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return oci;
}

Oci make_oci(const Omid& citing, const Omid& cited) {
    if (citing.entity_type != "br") throw WrongEntityType(citing.to_string());
    if (cited.entity_type != "br") throw WrongEntityType(cited.to_string());
    return Oci{citing.digits, cited.digits};
}

std::optional<std::pair<Omid, Omid>> to_omid_pair(
    const RawCitationPair& pair, const MetaStore& store,
    const std::function<void(const RawCitationPair&, std::string_view reason)>& unresolved) {
    auto citing = store.lookup(pair.citing);
    auto cited = store.lookup(pair.cited);
    if (citing && cited) return std::pair(*citing, *cited);
    if (unresolved) {
        std::string reason;
        if (!citing) reason = "citing_unmapped";
        if (!cited) reason += reason.empty() ? "cited_unmapped" : "+cited_unmapped";
        unresolved(pair, reason);
    }
    return std::nullopt;
}

std::pair<bool, bool> classify_self_citation(const BibResource& citing,
                                             const BibResource& cited) {
    // ORCID matches take precedence; name keys count only between authors
    // that both lack an ORCID. Missing data is conservatively "no".
    auto partition = [](const BibResource& r) {
        std::pair<std::set<std::string>, std::set<std::string>> out;  // orcids, names
        for (const auto& key : r.author_keys) {
            if (key.starts_with("orcid:"))
                out.first.insert(key);
            else
                out.second.insert(key);
        }
        return out;
    };
    auto [citing_orcids, citing_names] = partition(citing);
    auto [cited_orcids, cited_names] = partition(cited);
    bool author_self =
        std::any_of(citing_orcids.begin(), citing_orcids.end(),
                    [&](const std::string& k) { return cited_orcids.count(k); }) ||
        std::any_of(citing_names.begin(), citing_names.end(),
                    [&](const std::string& k) { return cited_names.count(k); });

    bool journal_self = false;
    for (const auto& id : citing.venue_ids)
        if (std::find(cited.venue_ids.begin(), cited.venue_ids.end(), id) !=
            cited.venue_ids.end())
            journal_self = true;
    for (const auto& key : citing.venue_keys)
        if (std::find(cited.venue_keys.begin(), cited.venue_keys.end(), key) !=
            cited.venue_keys.end())
            journal_self = true;
    return {author_self, journal_self};
}

bool CitationIndex::add(const RawCitationPair& raw, const Omid& citing,
                        const Omid& cited, const MetaStore& store, BuildDelta& delta) {
    Oci oci = make_oci(citing, cited);
    std::unique_lock lock(*mutex_);
    auto it = by_oci_.find(oci);
    if (it != by_oci_.end()) {
        // Duplicate citation from a further source: only provenance and the
        // source set change, first-writer-wins for metadata.
        if (!it->second.sources.count(raw.source)) {
            it->second.sources.insert(raw.source);
            delta.source_extensions.emplace_back(oci, raw.source);
        }
        return false;
    }
    Citation citation;
    citation.oci = oci;
    citation.citing = citing;
    citation.cited = cited;
    citation.sources.insert(raw.source);
    BibResource citing_res = store.get_resource(citing);   // throws UnknownOmid
    BibResource cited_res = store.get_resource(cited);
    citation.creation_date = citing_res.pub_date;
    if (citing_res.pub_date && cited_res.pub_date)
        citation.timespan = compute_timespan(*citing_res.pub_date, *cited_res.pub_date);
    auto [author_self, journal_self] = classify_self_citation(citing_res, cited_res);
    citation.author_self = author_self;
    citation.journal_self = journal_self;
    by_oci_.emplace(oci, std::move(citation));
    ++delta.new_citations;
    return true;
}

std::vector<Citation> CitationIndex::citations() const {
    std::shared_lock lock(*mutex_);
    std::vector<Citation> out;
    out.reserve(by_oci_.size());
    for (const auto& [oci, citation] : by_oci_) out.push_back(citation);
    return out;
}

std::optional<Citation> CitationIndex::find(const Oci& oci) const {
    std::shared_lock lock(*mutex_);
    auto it = by_oci_.find(oci);
    if (it == by_oci_.end()) return std::nullopt;
    return it->second;
}

std::size_t CitationIndex::size() const {
    std::shared_lock lock(*mutex_);
    return by_oci_.size();
}

void CitationIndex::insert(const Citation& citation) {
    std::unique_lock lock(*mutex_);
    by_oci_[citation.oci] = citation;
}

void CoverageReport::merge(const CoverageReport& other) {
    for (const auto& [combo, count] : other.combinations) combinations[combo] += count;
    for (const auto& [tag, count] : other.totals) totals[tag] += count;
    for (const auto& [tag, count] : other.exclusives) exclusives[tag] += count;
    grand_total += other.grand_total;
}

std::string CoverageReport::to_json() const {
    nlohmann::ordered_json j;
    j["grand_total"] = grand_total;
    j["totals"] = nlohmann::ordered_json::object();
    j["exclusives"] = nlohmann::ordered_json::object();
    for (const auto& [tag, count] : totals)
        j["totals"][std::string(source_name(tag))] = count;
    for (const auto& [tag, count] : exclusives)
        j["exclusives"][std::string(source_name(tag))] = count;
    j["combinations"] = nlohmann::ordered_json::array();
    for (const auto& [combo, count] : combinations) {
        nlohmann::ordered_json entry;
        entry["sources"] = nlohmann::ordered_json::array();
        for (auto tag : combo) entry["sources"].push_back(std::string(source_name(tag)));
        entry["count"] = count;
        j["combinations"].push_back(entry);
    }
    return j.dump(2);
}

CoverageReport coverage_stats(const std::vector<Citation>& citations) {
    CoverageReport report;
    for (const auto& citation : citations) {
        ++report.combinations[citation.sources];
        ++report.grand_total;
        for (auto tag : citation.sources) ++report.totals[tag];
        if (citation.sources.size() == 1) ++report.exclusives[*citation.sources.begin()];
    }
    // Every source appearing anywhere gets an exclusive entry, even if zero.
    for (const auto& [tag, count] : report.totals) report.exclusives.emplace(tag, 0);
    return report;
}

}  // namespace ocindex
