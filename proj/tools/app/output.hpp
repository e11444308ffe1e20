#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace sqrtw::app {

using Sha256 = std::array<std::uint8_t, 32>;

/// SHA-256 of the little-endian IEEE-754 bytes of (re, im) pairs.
Sha256 digest_increments(std::span<const std::complex<double>> values);

/// SHA-256 of raw bytes.
Sha256 digest_bytes(std::string_view bytes);

/// Digest of an ordered sequence of per-path digests.
Sha256 digest_of_digests(std::span<const Sha256> per_path);

/// SHA-256 of a file's bytes.
Sha256 digest_file(const std::filesystem::path& path);

/// "sha256:<hex>".
std::string to_string(const Sha256& d);

/// Line-oriented text output, plain or gzip-compressed. Throws IoError.
class TextSink {
public:
    virtual ~TextSink() = default;
    virtual void write(std::string_view text) = 0;
    virtual void close() = 0;
};

/// Opens `path` (".gz" is appended when compress is set). Throws IoError.
std::unique_ptr<TextSink> open_sink(const std::filesystem::path& path, bool compress);

/// Creates the directory if needed and checks that it is writable.
void prepare_output_dir(const std::filesystem::path& dir);

/// Writes pretty-printed JSON. Throws IoError.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace sqrtw::app
