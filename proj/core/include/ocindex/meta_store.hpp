#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ocindex/source_rows.hpp"

namespace ocindex {

/// Internal persistent identifier: "omid:" + entity type + "/" + digits.
/// The digit string is supplier prefix + counter, e.g. omid:br/06101801781.
struct Omid {
    std::string entity_type;  // "br", "ra", ...
    std::string digits;

    std::string to_string() const { return "omid:" + entity_type + "/" + digits; }
    static std::optional<Omid> parse(std::string_view text);

    /// Numeric ordering over the digit string (shorter = smaller counter).
    bool counter_less(const Omid& other) const;

    bool operator==(const Omid&) const = default;
    auto operator<=>(const Omid&) const = default;
};

struct BibResource {
    Omid omid;
    std::vector<ExternalId> ids;
    std::optional<PartialDate> pub_date;
    std::vector<ExternalId> venue_ids;
    std::vector<std::string> venue_keys;
    std::vector<std::string> author_keys;
};

struct UnknownOmid : std::runtime_error {
    explicit UnknownOmid(const std::string& omid, const std::string& canonical = {})
        : std::runtime_error("unknown omid: " + omid +
                             (canonical.empty() ? "" : " (merged into " + canonical + ")")),
          canonical_omid(canonical) {}
    std::string canonical_omid;  // set when the omid was retired by a merge
};

/// Deduplicating store of bibliographic resources behind the external-id →
/// OMID mapping. resolve_or_mint is linearizable per external id: a single
/// mutex serializes writers, reads take a shared lock.
class MetaStore {
public:
    explicit MetaStore(std::string supplier_prefix = "060");
    MetaStore(MetaStore&&) = default;
    MetaStore& operator=(MetaStore&&) = default;

    /// Returns the OMID for a set of co-referring ids, minting when none is
    /// mapped yet. Metadata merges on re-encounter: absent fields fill in,
    /// a more precise pub_date wins. When ids resolve to different existing
    /// OMIDs, the lowest counter survives and the rest become aliases.
    Omid resolve_or_mint(const MetadataRow& row);

    std::optional<Omid> lookup(const ExternalId& id) const;

    /// Throws UnknownOmid (carrying the canonical OMID for retired aliases).
    BibResource get_resource(const Omid& omid) const;

    void persist(const std::filesystem::path& path) const;
    static MetaStore load(const std::filesystem::path& path);

    /// Audit export: one (external-id, omid) CSV row per mapping entry.
    void export_mapping_csv(const std::filesystem::path& path) const;

    std::uint64_t mint_count() const { return counter_; }
    std::uint64_t merge_count() const { return merges_; }
    std::size_t mapping_size() const;
    std::size_t resource_count() const;
    std::vector<Omid> all_omids() const;
    const std::string& supplier_prefix() const { return prefix_; }

    /// Registers a resource under a caller-chosen OMID (store bootstrap /
    /// fixture seeding). Fails if any id or the OMID is already taken.
    void seed_resource(const BibResource& resource);

    bool operator==(const MetaStore& other) const;

private:
    Omid mint_locked();
    void merge_metadata_locked(BibResource& target, const MetadataRow& row);

    std::string prefix_;
    std::uint64_t counter_ = 0;
    std::uint64_t merges_ = 0;
    std::unordered_map<ExternalId, Omid, ExternalIdHash> mapping_;
    std::map<Omid, BibResource> resources_;
    std::map<Omid, Omid> aliases_;  // retired omid -> canonical omid
    mutable std::unique_ptr<std::shared_mutex> mutex_ =
        std::make_unique<std::shared_mutex>();
};

}  // namespace ocindex
