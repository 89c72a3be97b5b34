#include "ocindex/gzio.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <cstring>
#include <stdexcept>

namespace ocindex {

namespace {
constexpr std::size_t kBufSize = 1 << 16;
}

struct LineReader::Impl {
    std::ifstream file;
    z_stream strm{};
    bool compressed = false;
    bool stream_end = false;
    std::vector<char> in_buf;
    std::vector<char> out_buf;
    std::string pending;   // decompressed bytes not yet split into lines
    std::size_t pos = 0;

    explicit Impl(const std::filesystem::path& path)
        : file(path, std::ios::binary), in_buf(kBufSize), out_buf(kBufSize) {
        if (!file) throw std::runtime_error("cannot open " + path.string());
        int c0 = file.peek();
        compressed = (c0 == 0x1f);
        if (compressed) {
            strm.zalloc = Z_NULL;
            strm.zfree = Z_NULL;
            if (inflateInit2(&strm, 15 + 32) != Z_OK)
                throw std::runtime_error("inflateInit failed");
        }
    }

    ~Impl() {
        if (compressed) inflateEnd(&strm);
    }

    bool fill() {
        if (compressed) {
            if (stream_end) return false;
            if (strm.avail_in == 0) {
                file.read(in_buf.data(), static_cast<std::streamsize>(in_buf.size()));
                strm.avail_in = static_cast<uInt>(file.gcount());
                if (strm.avail_in == 0) return false;
                strm.next_in = reinterpret_cast<Bytef*>(in_buf.data());
            }
            strm.avail_out = static_cast<uInt>(out_buf.size());
            strm.next_out = reinterpret_cast<Bytef*>(out_buf.data());
            int rc = inflate(&strm, Z_NO_FLUSH);
            if (rc == Z_STREAM_END) stream_end = true;
            else if (rc != Z_OK && rc != Z_BUF_ERROR)
                throw std::runtime_error("gzip stream corrupt");
            std::size_t produced = out_buf.size() - strm.avail_out;
            pending.append(out_buf.data(), produced);
            return produced > 0 || !stream_end;
        }
        file.read(in_buf.data(), static_cast<std::streamsize>(in_buf.size()));
        std::size_t got = static_cast<std::size_t>(file.gcount());
        pending.append(in_buf.data(), got);
        return got > 0;
    }
};

LineReader::LineReader(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>(path)) {}
LineReader::~LineReader() = default;
LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

std::optional<std::string> LineReader::next() {
    auto& st = *impl_;
    for (;;) {
        auto nl = st.pending.find('\n', st.pos);
        if (nl != std::string::npos) {
            std::string line = st.pending.substr(st.pos, nl - st.pos);
            st.pos = nl + 1;
            if (st.pos > kBufSize * 4) {
                st.pending.erase(0, st.pos);
                st.pos = 0;
            }
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (!st.fill()) {
            if (st.pos < st.pending.size()) {
                std::string line = st.pending.substr(st.pos);
                st.pos = st.pending.size();
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            return std::nullopt;
        }
    }
}

struct OutputFile::Impl {
    std::filesystem::path path;
    std::ofstream file;
    bool gzip = false;
    bool closed = false;
    z_stream strm{};
    std::vector<char> out_buf;

    Impl(const std::filesystem::path& p, bool gz)
        : path(p), file(p, std::ios::binary), gzip(gz), out_buf(kBufSize) {
        if (!file) throw std::runtime_error("cannot create " + p.string());
        if (gzip) {
            strm.zalloc = Z_NULL;
            strm.zfree = Z_NULL;
            // windowBits 15+16: gzip wrapper, zero mtime, reproducible output
            if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                             Z_DEFAULT_STRATEGY) != Z_OK)
                throw std::runtime_error("deflateInit failed");
        }
    }

    void pump(int flush) {
        do {
            strm.avail_out = static_cast<uInt>(out_buf.size());
            strm.next_out = reinterpret_cast<Bytef*>(out_buf.data());
            deflate(&strm, flush);
            std::size_t produced = out_buf.size() - strm.avail_out;
            file.write(out_buf.data(), static_cast<std::streamsize>(produced));
        } while (strm.avail_out == 0);
    }

    void finish() {
        if (closed) return;
        closed = true;
        if (gzip) {
            strm.avail_in = 0;
            strm.next_in = Z_NULL;
            pump(Z_FINISH);
            deflateEnd(&strm);
        }
        file.close();
    }

    ~Impl() { finish(); }
};

OutputFile::OutputFile(const std::filesystem::path& path, bool gzip)
    : impl_(std::make_unique<Impl>(path, gzip)) {}
OutputFile::~OutputFile() = default;
OutputFile::OutputFile(OutputFile&&) noexcept = default;
OutputFile& OutputFile::operator=(OutputFile&&) noexcept = default;

void OutputFile::write(std::string_view data) {
    auto& st = *impl_;
    if (!st.gzip) {
        st.file.write(data.data(), static_cast<std::streamsize>(data.size()));
        return;
    }
    st.strm.avail_in = static_cast<uInt>(data.size());
    st.strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    st.pump(Z_NO_FLUSH);
}

void OutputFile::close() { impl_->finish(); }

const std::filesystem::path& OutputFile::path() const { return impl_->path; }

std::string sha256_hex_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(kBufSize);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

}  // namespace ocindex
