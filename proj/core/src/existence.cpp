#include "ocindex/existence.hpp"

#include <ctime>
#include <mutex>
#include <sstream>

#include "httplib.h"

namespace ocindex {

namespace {

std::string iso8601(std::chrono::system_clock::time_point tp) {
    std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string_view existence_status_name(ExistenceStatus status) {
    switch (status) {
        case ExistenceStatus::valid: return "valid";
        case ExistenceStatus::invalid: return "invalid";
        case ExistenceStatus::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<ExistenceStatus> existence_status_from_name(std::string_view name) {
    if (name == "valid") return ExistenceStatus::valid;
    if (name == "invalid") return ExistenceStatus::invalid;
    if (name == "unknown") return ExistenceStatus::unknown;
    return std::nullopt;
}

FixtureExistenceClient::FixtureExistenceClient(const std::filesystem::path& fixture) {
    std::ifstream in(fixture);
    if (!in) throw std::runtime_error("cannot open existence fixture: " + fixture.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        std::string key = line.substr(0, tab);
        ExistenceStatus status = ExistenceStatus::valid;
        if (tab != std::string::npos) {
            auto parsed = existence_status_from_name(line.substr(tab + 1));
            if (parsed) status = *parsed;
        }
        entries_[key] = status;
    }
}

ExistenceStatus FixtureExistenceClient::lookup(const ExternalId& id) {
    auto it = entries_.find(id.to_string());
    return it == entries_.end() ? ExistenceStatus::invalid : it->second;
}

ExistenceStatus LiveExistenceClient::lookup(const ExternalId& id) {
    std::string host;
    std::string path;
    switch (id.scheme) {
        case IdentifierScheme::doi:
            host = "https://doi.org";
            path = "/" + id.value;
            break;
        case IdentifierScheme::pmid:
            host = "https://pubmed.ncbi.nlm.nih.gov";
            path = "/" + id.value + "/";
            break;
        case IdentifierScheme::orcid:
            host = "https://orcid.org";
            path = "/" + id.value;
            break;
        default:
            return ExistenceStatus::unknown;
    }
    try {
        httplib::Client client(host);
        client.set_follow_location(false);
        client.set_connection_timeout(5);
        client.set_read_timeout(5);
        auto res = client.Head(path);
        if (!res) return ExistenceStatus::unknown;
        if (res->status == 404) return ExistenceStatus::invalid;
        if (res->status >= 200 && res->status < 400) return ExistenceStatus::valid;
        return ExistenceStatus::unknown;
    } catch (const std::exception&) {
        return ExistenceStatus::unknown;
    }
}

ValidationCache::ValidationCache(const std::filesystem::path& file) : file_(file) {
    std::ifstream in(file_);
    std::string line;
    while (in && std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string scheme, value, status, stamp;
        if (!std::getline(row, scheme, '\t') || !std::getline(row, value, '\t') ||
            !std::getline(row, status, '\t'))
            continue;
        std::getline(row, stamp, '\t');
        auto sch = scheme_from_name(scheme);
        auto st = existence_status_from_name(status);
        if (!sch || !st) continue;
        ExistenceVerdict verdict;
        verdict.status = *st;
        verdict.origin = VerdictOrigin::cache;
        verdict.checked_at = std::chrono::system_clock::now();
        entries_[std::string(scheme) + ":" + value] = verdict;
    }
    appender_.open(file_, std::ios::app);
}

std::optional<ExistenceVerdict> ValidationCache::get(const ExternalId& id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(id.to_string());
    if (it == entries_.end()) return std::nullopt;
    ExistenceVerdict verdict = it->second;
    verdict.origin = VerdictOrigin::cache;
    return verdict;
}

void ValidationCache::put(const ExternalId& id, const ExistenceVerdict& verdict) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(id.to_string(), verdict);
    if (!inserted) {
        if (it->second.status != ExistenceStatus::unknown) return;
        it->second = verdict;
    }
    if (appender_.is_open()) {
        appender_ << scheme_name(id.scheme) << '\t' << id.value << '\t'
                  << existence_status_name(verdict.status) << '\t'
                  << iso8601(verdict.checked_at) << '\n';
        appender_.flush();
    }
}

std::size_t ValidationCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

ExistenceVerdict check_existence(const ExternalId& id, ValidationCache& cache,
                                 ExistenceClient& client) {
    if (auto cached = cache.get(id);
        cached && cached->status != ExistenceStatus::unknown)
        return *cached;

    ExistenceVerdict verdict;
    verdict.checked_at = std::chrono::system_clock::now();
    verdict.origin = VerdictOrigin::external_service;
    if (id.scheme == IdentifierScheme::url) {
        // No authoritative registry for plain URLs.
        verdict.origin = VerdictOrigin::syntax_only;
        verdict.status =
            validate_syntax(id) ? ExistenceStatus::valid : ExistenceStatus::invalid;
        return verdict;
    }
    try {
        verdict.status = client.lookup(id);
    } catch (const std::exception&) {
        verdict.status = ExistenceStatus::unknown;
    }
    cache.put(id, verdict);
    return verdict;
}

}  // namespace ocindex
