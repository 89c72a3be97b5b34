#include "ocindex/api.hpp"

#include <algorithm>
#include <charconv>

#include "httplib.h"
#include "json.hpp"

namespace ocindex {

namespace {

using nlohmann::ordered_json;

ordered_json citation_json(const Citation& c) {
    ordered_json j;
    j["oci"] = c.oci.to_string();
    j["citing"] = c.citing.to_string();
    j["cited"] = c.cited.to_string();
    j["creation"] = c.creation_date ? c.creation_date->to_string() : "";
    j["timespan"] = c.timespan ? c.timespan->to_xsd() : "";
    j["author_sc"] = c.author_self ? "yes" : "no";
    j["journal_sc"] = c.journal_self ? "yes" : "no";
    j["sources"] = ordered_json::array();
    for (auto tag : c.sources) j["sources"].push_back(std::string(source_name(tag)));
    return j;
}

// Query-string parameter extraction (flat k=v&k=v form).
std::optional<std::string> query_param(const std::string& query, std::string_view key) {
    std::size_t pos = 0;
    while (pos < query.size()) {
        auto amp = query.find('&', pos);
        if (amp == std::string::npos) amp = query.size();
        auto eq = query.find('=', pos);
        if (eq != std::string::npos && eq < amp &&
            std::string_view(query).substr(pos, eq - pos) == key)
            return query.substr(eq + 1, amp - eq - 1);
        pos = amp + 1;
    }
    return std::nullopt;
}

long parse_long_or(const std::optional<std::string>& text, long fallback) {
    if (!text) return fallback;
    long value = fallback;
    auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc{} || ptr != text->data() + text->size()) return fallback;
    return value;
}

}  // namespace

std::shared_ptr<const ApiIndex> ApiIndex::build(std::vector<Citation> citations,
                                                const MetaStore* store) {
    auto index = std::make_shared<ApiIndex>();
    std::sort(citations.begin(), citations.end(),
              [](const Citation& a, const Citation& b) { return a.oci < b.oci; });
    index->citations = std::move(citations);
    for (std::size_t i = 0; i < index->citations.size(); ++i) {
        const Citation& c = index->citations[i];
        index->by_oci[c.oci.pair()] = i;
        index->outgoing[c.citing.digits].push_back(i);
        index->incoming[c.cited.digits].push_back(i);
    }
    if (store) {
        // Project the external-id mapping down to citation endpoints.
        for (const auto& omid : store->all_omids()) {
            BibResource res = store->get_resource(omid);
            for (const auto& id : res.ids) index->id_to_digits[id.to_string()] = omid.digits;
        }
    }
    index->stats = coverage_stats(index->citations);
    return index;
}

std::string citation_record_json(const Citation& citation) {
    return citation_json(citation).dump();
}

struct IndexService::Impl {
    std::string version;
    std::shared_ptr<const ApiIndex> index;
    mutable std::mutex swap_mutex;
    httplib::Server server;

    std::shared_ptr<const ApiIndex> snapshot() const {
        std::lock_guard lock(swap_mutex);
        return index;
    }

    // Resolves {id} to br digit string; nullopt = unparseable (400),
    // empty string = parseable but unmapped.
    std::optional<std::string> resolve_digits(const std::string& id_text) const {
        auto idx = snapshot();
        if (auto omid = Omid::parse(id_text)) {
            if (omid->entity_type != "br") return std::nullopt;
            return omid->digits;
        }
        try {
            ExternalId id = parse_external_id(id_text);
            auto it = idx->id_to_digits.find(id.to_string());
            if (it == idx->id_to_digits.end()) return std::string();
            return it->second;
        } catch (const MalformedIdentifier&) {
            return std::nullopt;
        }
    }

    Response list_endpoint(const std::string& id_text, const std::string& query,
                           bool incoming, bool count_only) const {
        auto idx = snapshot();
        auto digits = resolve_digits(id_text);
        if (!digits) return {400, R"({"error":"unparseable id"})", {}};
        Response res;
        if (digits->empty()) res.headers.emplace_back("X-Id-Status", "unmapped");
        const auto& table = incoming ? idx->incoming : idx->outgoing;
        const std::vector<std::size_t>* hits = nullptr;
        if (!digits->empty()) {
            auto it = table.find(*digits);
            if (it != table.end()) hits = &it->second;
        }
        std::size_t total = hits ? hits->size() : 0;
        if (count_only) {
            ordered_json j;
            j["count"] = total;
            res.body = j.dump();
            return res;
        }
        long limit = std::clamp(parse_long_or(query_param(query, "limit"), 1000), 1L,
                                10000L);
        long offset = std::max(parse_long_or(query_param(query, "offset"), 0), 0L);
        ordered_json out = ordered_json::array();
        for (std::size_t i = static_cast<std::size_t>(offset);
             hits && i < total && out.size() < static_cast<std::size_t>(limit); ++i)
            out.push_back(citation_json(idx->citations[(*hits)[i]]));
        res.body = out.dump();
        return res;
    }

    Response handle(const std::string& path, const std::string& query) const {
        if (path == "/health") {
            ordered_json j;
            j["status"] = snapshot() ? "ok" : "loading";
            j["version"] = version;
            return {200, j.dump(), {}};
        }
        if (!snapshot()) return {503, R"({"error":"index not loaded"})", {}};
        auto segment = [&](std::string_view prefix) -> std::optional<std::string> {
            if (!path.starts_with(prefix)) return std::nullopt;
            return path.substr(prefix.size());
        };
        if (auto oci_text = segment("/citation/")) {
            auto oci = Oci::parse(*oci_text);
            if (!oci) return {400, R"({"error":"malformed oci"})", {}};
            auto idx = snapshot();
            auto it = idx->by_oci.find(oci->pair());
            if (it == idx->by_oci.end()) return {404, R"({"error":"unknown oci"})", {}};
            return {200, citation_json(idx->citations[it->second]).dump(), {}};
        }
        if (auto id = segment("/citations/")) return list_endpoint(*id, query, true, false);
        if (auto id = segment("/references/")) return list_endpoint(*id, query, false, false);
        if (auto id = segment("/citation-count/"))
            return list_endpoint(*id, query, true, true);
        if (auto id = segment("/reference-count/"))
            return list_endpoint(*id, query, false, true);
        if (path == "/stats") return {200, snapshot()->stats.to_json(), {}};
        return {404, R"({"error":"no such endpoint"})", {}};
    }
};

IndexService::IndexService(std::string version) : impl_(std::make_unique<Impl>()) {
    impl_->version = std::move(version);
}

IndexService::~IndexService() { stop(); }

void IndexService::load(std::shared_ptr<const ApiIndex> index) {
    std::lock_guard lock(impl_->swap_mutex);
    impl_->index = std::move(index);
}

bool IndexService::loaded() const { return impl_->snapshot() != nullptr; }

IndexService::Response IndexService::handle(const std::string& path,
                                            const std::string& query) const {
    return impl_->handle(path, query);
}

bool IndexService::serve(const std::string& host, int port) {
    auto* impl = impl_.get();
    impl->server.Get(".*", [impl](const httplib::Request& req, httplib::Response& res) {
        std::string query;
        for (const auto& [key, value] : req.params) {
            if (!query.empty()) query.push_back('&');
            query += key + "=" + value;
        }
        Response out = impl->handle(req.path, query);
        res.status = out.status;
        for (const auto& [key, value] : out.headers) res.set_header(key, value);
        res.set_content(out.body, "application/json");
    });
    return impl->server.listen(host, port);
}

void IndexService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace ocindex
