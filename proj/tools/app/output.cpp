#include "output.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include <openssl/evp.h>
#include <zlib.h>

#include "config.hpp"

namespace sqrtw::app {

namespace {

class Sha256Builder {
public:
    Sha256Builder() : ctx_(EVP_MD_CTX_new()) {
        if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("SHA-256 initialisation failed");
        }
    }
    ~Sha256Builder() { EVP_MD_CTX_free(ctx_); }
    Sha256Builder(const Sha256Builder&) = delete;
    Sha256Builder& operator=(const Sha256Builder&) = delete;

    void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
    Sha256 finish() {
        Sha256 out{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, out.data(), &len);
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

void append_le(std::vector<std::uint8_t>& buf, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        buf.push_back(static_cast<std::uint8_t>(bits & 0xFFu));
        bits >>= 8;
    }
}

class FileSink final : public TextSink {
public:
    explicit FileSink(const std::filesystem::path& p) : path_(p), out_(p, std::ios::binary | std::ios::trunc) {
        if (!out_) throw IoError("cannot open " + p.string() + " for writing");
    }
    void write(std::string_view text) override {
        out_.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out_) throw IoError("write failed: " + path_.string());
    }
    void close() override {
        out_.close();
        if (!out_) throw IoError("close failed: " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

class GzipSink final : public TextSink {
public:
    explicit GzipSink(const std::filesystem::path& p) : path_(p), gz_(gzopen(p.c_str(), "wb6")) {
        if (gz_ == nullptr) throw IoError("cannot open " + p.string() + " for writing");
        gzbuffer(gz_, 1 << 20);
    }
    ~GzipSink() override {
        if (gz_ != nullptr) gzclose(gz_);
    }
    void write(std::string_view text) override {
        if (text.empty()) return;
        if (gzwrite(gz_, text.data(), static_cast<unsigned>(text.size())) == 0) {
            throw IoError("write failed: " + path_.string());
        }
    }
    void close() override {
        const int rc = gzclose(gz_);
        gz_ = nullptr;
        if (rc != Z_OK) throw IoError("close failed: " + path_.string());
    }

private:
    std::filesystem::path path_;
    gzFile gz_;
};

}  // namespace

Sha256 digest_increments(std::span<const std::complex<double>> values) {
    std::vector<std::uint8_t> buf;
    buf.reserve(values.size() * 16);
    for (const auto& z : values) {
        append_le(buf, z.real());
        append_le(buf, z.imag());
    }
    Sha256Builder h;
    h.update(buf.data(), buf.size());
    return h.finish();
}

Sha256 digest_bytes(std::string_view bytes) {
    Sha256Builder h;
    h.update(bytes.data(), bytes.size());
    return h.finish();
}

Sha256 digest_of_digests(std::span<const Sha256> per_path) {
    Sha256Builder h;
    for (const auto& d : per_path) h.update(d.data(), d.size());
    return h.finish();
}

Sha256 digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    Sha256Builder h;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.finish();
}

std::string to_string(const Sha256& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s = "sha256:";
    for (auto b : d) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xF]);
    }
    return s;
}

std::unique_ptr<TextSink> open_sink(const std::filesystem::path& path, bool compress) {
    if (compress) {
        auto p = path;
        p += ".gz";
        return std::make_unique<GzipSink>(p);
    }
    return std::make_unique<FileSink>(path);
}

void prepare_output_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    const auto probe = dir / ".sqrtw-write-probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory is not writable: " + dir.string());
    }
    std::filesystem::remove(probe, ec);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sqrtw::app
