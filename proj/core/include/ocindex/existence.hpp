#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "ocindex/identifiers.hpp"

namespace ocindex {

enum class ExistenceStatus { valid, invalid, unknown };
enum class VerdictOrigin { syntax_only, cache, external_service };

std::string_view existence_status_name(ExistenceStatus status);
std::optional<ExistenceStatus> existence_status_from_name(std::string_view name);

struct ExistenceVerdict {
    ExistenceStatus status = ExistenceStatus::unknown;
    std::chrono::system_clock::time_point checked_at;
    VerdictOrigin origin = VerdictOrigin::syntax_only;
};

/// Per-scheme existence lookup. Implementations must be shareable across
/// worker threads.
class ExistenceClient {
public:
    virtual ~ExistenceClient() = default;
    virtual ExistenceStatus lookup(const ExternalId& id) = 0;
};

/// Answers every lookup with a fixed status. Default backend.
class StubExistenceClient : public ExistenceClient {
public:
    explicit StubExistenceClient(ExistenceStatus answer = ExistenceStatus::valid)
        : answer_(answer) {}
    ExistenceStatus lookup(const ExternalId&) override { return answer_; }

private:
    ExistenceStatus answer_;
};

/// Answers from a fixture file of "scheme:value<TAB>status" lines; ids not
/// listed come back invalid (the fixture is the registry).
class FixtureExistenceClient : public ExistenceClient {
public:
    explicit FixtureExistenceClient(const std::filesystem::path& fixture);
    ExistenceStatus lookup(const ExternalId& id) override;

private:
    std::unordered_map<std::string, ExistenceStatus> entries_;
};

/// Queries the scheme's public resolver over HTTP. Best effort: any
/// transport failure degrades to unknown.
class LiveExistenceClient : public ExistenceClient {
public:
    ExistenceStatus lookup(const ExternalId& id) override;
};

/// Thread-safe verdict cache with optional append-only file persistence.
/// File format: scheme, value, status, ISO-8601 timestamp, tab-separated.
class ValidationCache {
public:
    ValidationCache() = default;
    explicit ValidationCache(const std::filesystem::path& file);

    std::optional<ExistenceVerdict> get(const ExternalId& id) const;

    /// Atomic insert-if-absent; valid/invalid verdicts are immutable, an
    /// unknown verdict may be overwritten by a later definitive one.
    void put(const ExternalId& id, const ExistenceVerdict& verdict);

    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, ExistenceVerdict> entries_;
    std::filesystem::path file_;
    std::ofstream appender_;
};

/// Cache-first existence check; on miss delegates to the client and caches
/// the verdict. Client failures yield unknown and never abort the pipeline.
ExistenceVerdict check_existence(const ExternalId& id, ValidationCache& cache,
                                 ExistenceClient& client);

}  // namespace ocindex
