#pragma once

#include "stackindex/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stackindex {

inline constexpr int kMetadataVersion = 1;

/// Sidecar written next to every saved dataset as `<csv path>.meta`:
/// versioned `key=value` lines (version, fetched_at, site, tags, from, to, sha256).
struct DatasetMetadata {
    int version = kMetadataVersion;
    std::string fetched_at; ///< ISO-8601 UTC, empty for imported files
    std::string site = "stackoverflow";
    std::vector<std::string> tags;
    std::string from; ///< first month, `YYYY-MM`
    std::string to;   ///< last month, `YYYY-MM`
    std::string sha256; ///< hex digest of the CSV bytes
};

std::string sha256_hex(std::string_view bytes);

/// Digest of the canonical CSV serialization; identifies dataset contents.
std::string dataset_checksum(const Dataset& dataset);

std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

std::string format_metadata(const DatasetMetadata& meta);
/// Throws VersionUnsupported for any version other than kMetadataVersion,
/// IoError for malformed text.
DatasetMetadata parse_metadata(std::string_view text);

/// Writes the canonical CSV and its sidecar, each through a temporary file
/// renamed into place. Tags, range and checksum in `meta` are filled in here.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path, DatasetMetadata meta = {});

/// Reads a dataset saved by save_dataset, verifying the sidecar version and
/// checksum. Throws IoError, VersionUnsupported or ChecksumMismatch.
Dataset load_dataset(const std::filesystem::path& path, DatasetMetadata* meta = nullptr);

/// Like load_dataset when a sidecar exists; otherwise parses the bare CSV.
Dataset open_dataset(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace stackindex
