#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ocindex {

/// Line reader over a plain or gzip-compressed file (sniffed by magic
/// bytes, not by extension).
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(LineReader&&) noexcept;
    LineReader& operator=(LineReader&&) noexcept;

    /// Next line without its terminator; nullopt at end of stream.
    std::optional<std::string> next();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Byte sink that optionally gzip-compresses. Output is deterministic
/// (no timestamps in the gzip header).
class OutputFile {
public:
    OutputFile(const std::filesystem::path& path, bool gzip);
    ~OutputFile();
    OutputFile(OutputFile&&) noexcept;
    OutputFile& operator=(OutputFile&&) noexcept;

    void write(std::string_view data);
    void close();
    const std::filesystem::path& path() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string sha256_hex_file(const std::filesystem::path& path);

}  // namespace ocindex
