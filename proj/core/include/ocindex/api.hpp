#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ocindex/exporters.hpp"
#include "ocindex/index_core.hpp"

namespace ocindex {

/// Immutable in-memory lookup structures built once per (re)load. Readers
/// grab a shared_ptr snapshot, so a reload swaps atomically.
struct ApiIndex {
    std::vector<Citation> citations;  // sorted by OCI
    std::unordered_map<std::string, std::size_t> by_oci;           // oci pair -> idx
    std::unordered_map<std::string, std::vector<std::size_t>> outgoing;  // citing digits
    std::unordered_map<std::string, std::vector<std::size_t>> incoming;  // cited digits
    std::unordered_map<std::string, std::string> id_to_digits;     // "scheme:value"
    CoverageReport stats;

    static std::shared_ptr<const ApiIndex> build(std::vector<Citation> citations,
                                                 const MetaStore* store);
};

std::string citation_record_json(const Citation& citation);

/// HTTP read-only lookup service. Endpoints:
///   GET /citation/{oci}            GET /citations/{id}   GET /references/{id}
///   GET /citation-count/{id}       GET /reference-count/{id}
///   GET /stats                     GET /health
/// {id} is an omid:br/... or any mapped scheme:value external id; list
/// endpoints paginate with limit (default 1000, max 10000) and offset.
class IndexService {
public:
    explicit IndexService(std::string version = "0.1.0");
    ~IndexService();

    void load(std::shared_ptr<const ApiIndex> index);
    bool loaded() const;

    /// Blocks serving on the port; returns false if binding fails.
    bool serve(const std::string& host, int port);
    void stop();

    /// Dispatches one request without a socket (also used by tests).
    struct Response {
        int status = 200;
        std::string body;
        std::vector<std::pair<std::string, std::string>> headers;
    };
    Response handle(const std::string& path, const std::string& query) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ocindex
