#include "stackindex/storage.hpp"

#include "stackindex/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>

namespace stackindex {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
        throw Error(ErrorCode::IoError, "sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string dataset_checksum(const Dataset& dataset) {
    return sha256_hex(serialize_dataset(dataset));
}

fs::path metadata_path(const fs::path& csv_path) {
    auto p = csv_path;
    p += ".meta";
    return p;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for reading", {{"path", path.string()}});
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "read failed for " + path.string(), {{"path", path.string()}});
    }
    return buffer.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    auto temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot open " + temp.string() + " for writing", {{"path", temp.string()}});
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            throw Error(ErrorCode::IoError, "write failed for " + temp.string(), {{"path", temp.string()}});
        }
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw Error(ErrorCode::IoError, "cannot move " + temp.string() + " into place", {{"path", path.string()}});
    }
}

std::string format_metadata(const DatasetMetadata& meta) {
    std::string tags;
    for (const auto& tag : meta.tags) {
        if (!tags.empty()) {
            tags.push_back(';');
        }
        tags += tag;
    }
    std::string out;
    out += "version=" + std::to_string(meta.version) + "\n";
    out += "fetched_at=" + meta.fetched_at + "\n";
    out += "site=" + meta.site + "\n";
    out += "tags=" + tags + "\n";
    out += "from=" + meta.from + "\n";
    out += "to=" + meta.to + "\n";
    out += "sha256=" + meta.sha256 + "\n";
    return out;
}

DatasetMetadata parse_metadata(std::string_view text) {
    DatasetMetadata meta;
    meta.site.clear();
    bool has_version = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::IoError, "malformed metadata line '" + std::string(line) + "'");
        }
        const auto key = line.substr(0, eq);
        const auto value = std::string(line.substr(eq + 1));
        if (key == "version") {
            int v = 0;
            auto res = std::from_chars(value.data(), value.data() + value.size(), v);
            if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
                throw Error(ErrorCode::IoError, "malformed metadata version '" + value + "'");
            }
            if (v != kMetadataVersion) {
                throw Error(ErrorCode::VersionUnsupported,
                            "metadata version " + value + " is not supported; this build reads version " +
                                std::to_string(kMetadataVersion),
                            {{"found", value}, {"supported", std::to_string(kMetadataVersion)}});
            }
            meta.version = v;
            has_version = true;
        } else if (key == "fetched_at") {
            meta.fetched_at = value;
        } else if (key == "site") {
            meta.site = value;
        } else if (key == "tags") {
            std::size_t start = 0;
            while (start < value.size()) {
                auto end = value.find(';', start);
                if (end == std::string::npos) {
                    end = value.size();
                }
                meta.tags.push_back(value.substr(start, end - start));
                start = end + 1;
            }
        } else if (key == "from") {
            meta.from = value;
        } else if (key == "to") {
            meta.to = value;
        } else if (key == "sha256") {
            meta.sha256 = value;
        }
        // unknown keys are tolerated within a version
    }
    if (!has_version) {
        throw Error(ErrorCode::IoError, "metadata has no version line");
    }
    return meta;
}

void save_dataset(const Dataset& dataset, const fs::path& path, DatasetMetadata meta) {
    const auto csv = serialize_dataset(dataset);
    meta.version = kMetadataVersion;
    meta.tags = dataset.tags();
    meta.from = dataset.first_month().to_string();
    meta.to = dataset.last_month().to_string();
    meta.sha256 = sha256_hex(csv);
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    write_file_atomic(path, csv);
    write_file_atomic(metadata_path(path), format_metadata(meta));
}

Dataset load_dataset(const fs::path& path, DatasetMetadata* meta_out) {
    const auto meta = parse_metadata(read_file(metadata_path(path)));
    const auto csv = read_file(path);
    const auto digest = sha256_hex(csv);
    if (digest != meta.sha256) {
        throw Error(ErrorCode::ChecksumMismatch, "checksum mismatch for " + path.string(),
                    {{"path", path.string()}, {"expected", meta.sha256}, {"actual", digest}});
    }
    auto dataset = parse_dataset(csv);
    if (meta_out) {
        *meta_out = meta;
    }
    return dataset;
}

Dataset open_dataset(const fs::path& path) {
    if (fs::exists(metadata_path(path))) {
        return load_dataset(path);
    }
    return parse_dataset(read_file(path));
}

} // namespace stackindex
