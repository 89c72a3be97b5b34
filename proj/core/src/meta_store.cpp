#include "ocindex/meta_store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ocindex/csv.hpp"

namespace ocindex {

namespace {

int precision_rank(const std::optional<PartialDate>& date) {
    if (!date) return -1;
    return static_cast<int>(date->precision());
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

[[noreturn]] void corrupt(const std::filesystem::path& path, long line_no,
                          const std::string& what) {
    throw std::runtime_error("corrupt meta store " + path.string() + ":" +
                             std::to_string(line_no) + ": " + what);
}

}  // namespace

std::optional<Omid> Omid::parse(std::string_view text) {
    if (!text.starts_with("omid:")) return std::nullopt;
    text.remove_prefix(5);
    auto slash = text.find('/');
    if (slash == std::string_view::npos || slash == 0) return std::nullopt;
    Omid omid;
    omid.entity_type = std::string(text.substr(0, slash));
    omid.digits = std::string(text.substr(slash + 1));
    if (omid.digits.empty()) return std::nullopt;
    for (char c : omid.digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return omid;
}

bool Omid::counter_less(const Omid& other) const {
    if (digits.size() != other.digits.size()) return digits.size() < other.digits.size();
    return digits < other.digits;
}

MetaStore::MetaStore(std::string supplier_prefix) : prefix_(std::move(supplier_prefix)) {}

Omid MetaStore::mint_locked() {
    ++counter_;
    std::string digits = std::to_string(counter_);
    // Pad to a stable 8-digit counter field behind the supplier prefix so
    // digit strings order the same way as counters.
    if (digits.size() < 8) digits = std::string(8 - digits.size(), '0') + digits;
    return Omid{"br", prefix_ + digits};
}

void MetaStore::merge_metadata_locked(BibResource& target, const MetadataRow& row) {
    for (const auto& id : row.ids)
        if (std::find(target.ids.begin(), target.ids.end(), id) == target.ids.end())
            target.ids.push_back(id);
    if (precision_rank(row.pub_date) > precision_rank(target.pub_date))
        target.pub_date = row.pub_date;
    for (const auto& id : row.venue_ids)
        if (std::find(target.venue_ids.begin(), target.venue_ids.end(), id) ==
            target.venue_ids.end())
            target.venue_ids.push_back(id);
    for (const auto& key : row.venue_keys)
        if (std::find(target.venue_keys.begin(), target.venue_keys.end(), key) ==
            target.venue_keys.end())
            target.venue_keys.push_back(key);
    if (target.author_keys.empty()) target.author_keys = row.author_keys;
}

Omid MetaStore::resolve_or_mint(const MetadataRow& row) {
    std::unique_lock lock(*mutex_);

    std::vector<Omid> hits;
    for (const auto& id : row.ids) {
        auto it = mapping_.find(id);
        if (it != mapping_.end() &&
            std::find(hits.begin(), hits.end(), it->second) == hits.end())
            hits.push_back(it->second);
    }

    Omid canonical;
    if (hits.empty()) {
        canonical = mint_locked();
        resources_[canonical].omid = canonical;
    } else {
        canonical = *std::min_element(hits.begin(), hits.end(),
                                      [](const Omid& a, const Omid& b) {
                                          return a.counter_less(b);
                                      });
        // Conflicting prior mappings: lowest counter wins, the rest retire.
        for (const auto& loser : hits) {
            if (loser == canonical) continue;
            ++merges_;
            auto node = resources_.extract(loser);
            if (!node.empty()) {
                BibResource& victim = node.mapped();
                MetadataRow as_row;
                as_row.ids = victim.ids;
                as_row.pub_date = victim.pub_date;
                as_row.venue_ids = victim.venue_ids;
                as_row.venue_keys = victim.venue_keys;
                as_row.author_keys = victim.author_keys;
                merge_metadata_locked(resources_.at(canonical), as_row);
            }
            aliases_[loser] = canonical;
            for (auto& [id, omid] : mapping_)
                if (omid == loser) omid = canonical;
        }
    }

    for (const auto& id : row.ids) mapping_.emplace(id, canonical);
    merge_metadata_locked(resources_.at(canonical), row);
    return canonical;
}

std::optional<Omid> MetaStore::lookup(const ExternalId& id) const {
    std::shared_lock lock(*mutex_);
    auto it = mapping_.find(id);
    if (it == mapping_.end()) return std::nullopt;
    return it->second;
}

BibResource MetaStore::get_resource(const Omid& omid) const {
    std::shared_lock lock(*mutex_);
    auto it = resources_.find(omid);
    if (it != resources_.end()) return it->second;
    auto alias = aliases_.find(omid);
    if (alias != aliases_.end())
        throw UnknownOmid(omid.to_string(), alias->second.to_string());
    throw UnknownOmid(omid.to_string());
}

std::size_t MetaStore::mapping_size() const {
    std::shared_lock lock(*mutex_);
    return mapping_.size();
}

std::size_t MetaStore::resource_count() const {
    std::shared_lock lock(*mutex_);
    return resources_.size();
}

std::vector<Omid> MetaStore::all_omids() const {
    std::shared_lock lock(*mutex_);
    std::vector<Omid> out;
    out.reserve(resources_.size());
    for (const auto& [omid, res] : resources_) out.push_back(omid);
    return out;
}

void MetaStore::seed_resource(const BibResource& resource) {
    std::unique_lock lock(*mutex_);
    if (resources_.count(resource.omid) || aliases_.count(resource.omid))
        throw std::runtime_error("omid already present: " + resource.omid.to_string());
    for (const auto& id : resource.ids)
        if (mapping_.count(id))
            throw std::runtime_error("id already mapped: " + id.to_string());
    resources_[resource.omid] = resource;
    for (const auto& id : resource.ids) mapping_.emplace(id, resource.omid);
}

void MetaStore::persist(const std::filesystem::path& path) const {
    std::shared_lock lock(*mutex_);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "ocindex-meta 1\n";
    out << "prefix\t" << prefix_ << '\n';
    out << "counter\t" << counter_ << '\n';
    out << "merges\t" << merges_ << '\n';
    for (const auto& [omid, res] : resources_) {
        std::vector<std::string> ids;
        for (const auto& id : res.ids) ids.push_back(id.to_string());
        std::vector<std::string> venue;
        for (const auto& id : res.venue_ids) venue.push_back(id.to_string());
        for (const auto& key : res.venue_keys) venue.push_back("name:" + key);
        out << "resource\t" << omid.to_string() << '\t' << join_tokens(ids) << '\t'
            << (res.pub_date ? res.pub_date->to_string() : "") << '\t'
            << join_tokens(venue) << '\t' << join_tokens(res.author_keys) << '\n';
    }
    for (const auto& [retired, canonical] : aliases_)
        out << "alias\t" << retired.to_string() << '\t' << canonical.to_string() << '\n';
    // Mapping entries not implied by a resource's own id list (aliased ids).
    std::map<std::string, std::string> extra;
    for (const auto& [id, omid] : mapping_) {
        const auto& res = resources_.at(omid);
        if (std::find(res.ids.begin(), res.ids.end(), id) == res.ids.end())
            extra[id.to_string()] = omid.to_string();
    }
    for (const auto& [id, omid] : extra) out << "map\t" << id << '\t' << omid << '\n';
}

MetaStore MetaStore::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    MetaStore store;
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line) || line != "ocindex-meta 1")
        corrupt(path, 1, "bad magic line");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        // Split on tabs keeping empty trailing fields.
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        const std::string& kind = fields[0];
        if (kind == "prefix" && fields.size() == 2) {
            store.prefix_ = fields[1];
        } else if (kind == "counter" && fields.size() == 2) {
            store.counter_ = std::stoull(fields[1]);
        } else if (kind == "merges" && fields.size() == 2) {
            store.merges_ = std::stoull(fields[1]);
        } else if (kind == "resource" && fields.size() == 6) {
            auto omid = Omid::parse(fields[1]);
            if (!omid) corrupt(path, line_no, "bad omid " + fields[1]);
            BibResource res;
            res.omid = *omid;
            try {
                for (const auto& token : split_tokens(fields[2]))
                    res.ids.push_back(parse_external_id(token));
                for (const auto& token : split_tokens(fields[4])) {
                    if (token.starts_with("name:"))
                        res.venue_keys.push_back(token.substr(5));
                    else
                        res.venue_ids.push_back(parse_external_id(token));
                }
            } catch (const MalformedIdentifier& e) {
                corrupt(path, line_no, e.what());
            }
            if (!fields[3].empty()) {
                res.pub_date = PartialDate::parse(fields[3]);
                if (!res.pub_date) corrupt(path, line_no, "bad date " + fields[3]);
            }
            res.author_keys = split_tokens(fields[5]);
            store.resources_[*omid] = res;
            for (const auto& id : res.ids) store.mapping_.emplace(id, *omid);
        } else if (kind == "alias" && fields.size() == 3) {
            auto retired = Omid::parse(fields[1]);
            auto canonical = Omid::parse(fields[2]);
            if (!retired || !canonical) corrupt(path, line_no, "bad alias line");
            store.aliases_[*retired] = *canonical;
        } else if (kind == "map" && fields.size() == 3) {
            auto omid = Omid::parse(fields[2]);
            if (!omid) corrupt(path, line_no, "bad omid " + fields[2]);
            try {
                store.mapping_[parse_external_id(fields[1])] = *omid;
            } catch (const MalformedIdentifier& e) {
                corrupt(path, line_no, e.what());
            }
        } else {
            corrupt(path, line_no, "unrecognized record \"" + kind + "\"");
        }
    }
    return store;
}

void MetaStore::export_mapping_csv(const std::filesystem::path& path) const {
    std::shared_lock lock(*mutex_);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv_row(out, {"external_id", "omid"});
    std::map<std::string, std::string> sorted;
    for (const auto& [id, omid] : mapping_) sorted[id.to_string()] = omid.to_string();
    for (const auto& [id, omid] : sorted) write_csv_row(out, {id, omid});
}

bool MetaStore::operator==(const MetaStore& other) const {
    std::shared_lock lock_a(*mutex_, std::defer_lock);
    std::shared_lock lock_b(*other.mutex_, std::defer_lock);
    if (this == &other) return true;
    std::lock(lock_a, lock_b);
    auto key = [](const BibResource& r) {
        return std::tuple(r.omid, r.ids, r.pub_date, r.venue_ids, r.venue_keys,
                          r.author_keys);
    };
    if (prefix_ != other.prefix_ || counter_ != other.counter_ ||
        merges_ != other.merges_ || aliases_ != other.aliases_ ||
        mapping_ != other.mapping_ || resources_.size() != other.resources_.size())
        return false;
    for (const auto& [omid, res] : resources_) {
        auto it = other.resources_.find(omid);
        if (it == other.resources_.end() || key(res) != key(it->second)) return false;
    }
    return true;
}

}  // namespace ocindex
