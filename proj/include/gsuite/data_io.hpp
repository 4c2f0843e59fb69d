#pragma once

// Dataset loading, synthetic generators and the dataset registry.
//
// Edge-list format (UTF-8 text):
//   optional first line "%nodes N"
//   one edge per line: "<src> <dst>", 0-based decimal, ASCII whitespace
//   lines starting with '#' are comments; blank lines are ignored
//
// Feature format: header-less CSV, row i holds node i's features.

#include <gsuite/dense.hpp>
#include <gsuite/graph.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsuite {

enum class DatasetSource { file, synthetic };

std::string_view to_string(DatasetSource s) noexcept;

struct DatasetRecord {
    std::string name;
    std::string short_form;
    std::size_t num_nodes = 0;
    std::size_t feature_length = 0;
    std::size_t num_edges = 0;
    DatasetSource source = DatasetSource::file;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

CooGraph parse_edge_list(std::istream& in, std::string_view origin = "<stream>");
CooGraph load_edge_list(const std::filesystem::path& path);

/// Writes the canonical text form: "%nodes N" then one "src dst" per line.
void write_edge_list(const CooGraph& g, std::ostream& out);

DenseMatrix<double> parse_features(std::istream& in, std::size_t expected_nodes,
                                   std::string_view origin = "<stream>");
DenseMatrix<double> load_features(const std::filesystem::path& path, std::size_t expected_nodes);

/// Directed G(n, p): one SplitMix64 draw per ordered pair (u, v), u != v, in
/// row-major pair order; the edge u -> v is kept when the draw is below p.
CooGraph gen_er_graph(std::size_t n, double p, std::uint64_t seed);

/// Features uniform in [-1, 1].
DenseMatrix<double> gen_features(std::size_t n, std::size_t f, std::uint64_t seed);

/// The five reference datasets followed by `synthetic_presets`.
std::vector<DatasetRecord> registry(std::span<const DatasetRecord> synthetic_presets = {});

/// Looks up a reference dataset by lowercase preset name (cora, citeseer, ...).
std::optional<DatasetRecord> find_preset(std::string_view name);

struct ErPreset {
    std::size_t num_nodes = 0;
    double probability = 0.0;
    std::uint64_t seed = 0;
    std::size_t feature_length = kDefaultErFeatures;

    static constexpr std::size_t kDefaultErFeatures = 16;
};

/// Parses "er:<n>:<p>:<seed>[:<features>]". Returns nullopt when `text` does
/// not start with "er:"; throws DataError when it does but is malformed.
std::optional<ErPreset> parse_er_preset(std::string_view text);

struct Dataset {
    DatasetRecord record;
    CooGraph graph;
    DenseMatrix<double> features;
};

/// Resolves a dataset argument: an ER preset, or "EDGES,FEATURES" file paths.
/// Reference preset names are metadata only and fail with DataError.
Dataset load_dataset(std::string_view argument);

} // namespace gsuite
