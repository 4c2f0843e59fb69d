#include <gsuite/data_io.hpp>
#include <gsuite/rng.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gsuite {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\v\f";

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(kWhitespace);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(kWhitespace);
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        pos = s.find_first_not_of(kWhitespace, pos);
        if (pos == std::string_view::npos) {
            break;
        }
        const auto end = s.find_first_of(kWhitespace, pos);
        out.push_back(s.substr(pos, end == std::string_view::npos ? end : end - pos));
        if (end == std::string_view::npos) {
            break;
        }
        pos = end;
    }
    return out;
}

[[noreturn]] void parse_failure(std::string_view origin, std::size_t line, const std::string& what)
{
    throw DataError(std::string(origin) + ":" + std::to_string(line) + ": " + what);
}

template <typename Int>
std::optional<Int> parse_unsigned(std::string_view token)
{
    Int value{};
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::optional<double> parse_real(std::string_view token)
{
    double value{};
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    return in;
}

} // namespace

std::string_view to_string(DatasetSource s) noexcept
{
    return s == DatasetSource::file ? "file" : "synthetic";
}

CooGraph parse_edge_list(std::istream& in, std::string_view origin)
{
    constexpr std::uint64_t kMaxNode = std::numeric_limits<NodeId>::max();
    std::optional<std::uint64_t> declared_nodes;
    std::vector<NodeId> src;
    std::vector<NodeId> dst;
    std::uint64_t max_index = 0;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.front() == '%') {
            const auto tokens = split_whitespace(line);
            if (line_no != 1 || tokens.size() != 2 || tokens[0] != "%nodes") {
                parse_failure(origin, line_no, "only a leading '%nodes N' directive is allowed");
            }
            const auto n = parse_unsigned<std::uint64_t>(tokens[1]);
            if (!n) {
                parse_failure(origin, line_no, "bad node count '" + std::string(tokens[1]) + "'");
            }
            if (*n > kMaxNode + 1) {
                parse_failure(origin, line_no, "node count overflows 32-bit node ids");
            }
            declared_nodes = *n;
            continue;
        }
        const auto tokens = split_whitespace(line);
        if (tokens.size() != 2) {
            parse_failure(origin, line_no, "expected 'src dst', got '" + std::string(line) + "'");
        }
        std::uint64_t ends[2];
        for (int t = 0; t < 2; ++t) {
            const auto v = parse_unsigned<std::uint64_t>(tokens[t]);
            if (!v) {
                parse_failure(origin, line_no, "bad node index '" + std::string(tokens[t]) + "'");
            }
            if (*v > kMaxNode - 1) {
                parse_failure(origin, line_no, "node index " + std::string(tokens[t]) +
                                                   " overflows 32-bit node ids");
            }
            if (declared_nodes && *v >= *declared_nodes) {
                parse_failure(origin, line_no, "node index " + std::string(tokens[t]) +
                                                   " exceeds declared %nodes " +
                                                   std::to_string(*declared_nodes));
            }
            ends[t] = *v;
        }
        src.push_back(static_cast<NodeId>(ends[0]));
        dst.push_back(static_cast<NodeId>(ends[1]));
        max_index = std::max({max_index, ends[0], ends[1]});
    }

    std::size_t n = 0;
    if (declared_nodes) {
        n = static_cast<std::size_t>(*declared_nodes);
    } else if (!src.empty()) {
        n = static_cast<std::size_t>(max_index) + 1;
    }
    return CooGraph(n, std::move(src), std::move(dst));
}

CooGraph load_edge_list(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_edge_list(in, path.string());
}

void write_edge_list(const CooGraph& g, std::ostream& out)
{
    out << "%nodes " << g.num_nodes() << '\n';
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        out << g.src()[k] << ' ' << g.dst()[k] << '\n';
    }
}

DenseMatrix<double> parse_features(std::istream& in, std::size_t expected_nodes,
                                   std::string_view origin)
{
    std::vector<double> data;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        std::size_t cells = 0;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            const auto cell = trim(line.substr(pos, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - pos));
            const auto v = parse_real(cell);
            if (!v) {
                parse_failure(origin, line_no, "non-numeric cell '" + std::string(cell) + "'");
            }
            if (!std::isfinite(*v)) {
                parse_failure(origin, line_no, "non-finite cell '" + std::string(cell) + "'");
            }
            data.push_back(*v);
            ++cells;
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (rows == 0) {
            width = cells;
        } else if (cells != width) {
            parse_failure(origin, line_no,
                          "ragged row: " + std::to_string(cells) + " cells, expected " +
                              std::to_string(width));
        }
        ++rows;
    }
    if (rows != expected_nodes) {
        throw DataError(std::string(origin) + ": " + std::to_string(rows) +
                        " feature rows for " + std::to_string(expected_nodes) + " nodes");
    }
    return DenseMatrix<double>(rows, width, std::move(data));
}

DenseMatrix<double> load_features(const std::filesystem::path& path, std::size_t expected_nodes)
{
    auto in = open_input(path);
    return parse_features(in, expected_nodes, path.string());
}

CooGraph gen_er_graph(std::size_t n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError("edge probability must lie in [0, 1]");
    }
    SplitMix64 rng(derive_seed(seed, "er"));
    std::vector<NodeId> src;
    std::vector<NodeId> dst;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) {
                continue;
            }
            if (rng.next_unit() < p) {
                src.push_back(static_cast<NodeId>(u));
                dst.push_back(static_cast<NodeId>(v));
            }
        }
    }
    return CooGraph(n, std::move(src), std::move(dst));
}

DenseMatrix<double> gen_features(std::size_t n, std::size_t f, std::uint64_t seed)
{
    SplitMix64 rng(derive_seed(seed, "features"));
    DenseMatrix<double> x(n, f);
    for (double& v : x.data()) {
        v = rng.next_uniform(-1.0, 1.0);
    }
    return x;
}

std::vector<DatasetRecord> registry(std::span<const DatasetRecord> synthetic_presets)
{
    std::vector<DatasetRecord> out = {
        {"Cora", "CR", 2708, 1433, 5429, DatasetSource::file},
        {"CiteSeer", "CS", 3327, 3703, 4732, DatasetSource::file},
        {"PubMed", "PB", 19717, 500, 44438, DatasetSource::file},
        {"Reddit", "RD", 232965, 602, 11606919, DatasetSource::file},
        {"LiveJournal", "LJ", 4847571, 1, 68993773, DatasetSource::file},
    };
    out.insert(out.end(), synthetic_presets.begin(), synthetic_presets.end());
    return out;
}

std::optional<DatasetRecord> find_preset(std::string_view name)
{
    for (const auto& r : registry()) {
        std::string lower = r.name;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lower == name) {
            return r;
        }
    }
    return std::nullopt;
}

std::optional<ErPreset> parse_er_preset(std::string_view text)
{
    if (!text.starts_with("er:")) {
        return std::nullopt;
    }
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string_view::npos ? colon : colon - pos));
        if (colon == std::string_view::npos) {
            break;
        }
        pos = colon + 1;
    }
    const auto malformed = [&](const std::string& why) -> DataError {
        return DataError("bad synthetic dataset '" + std::string(text) + "': " + why +
                         " (expected er:<n>:<p>:<seed>[:<features>])");
    };
    if (parts.size() != 4 && parts.size() != 5) {
        throw malformed("wrong number of fields");
    }
    ErPreset preset;
    const auto n = parse_unsigned<std::size_t>(parts[1]);
    const auto p = parse_real(parts[2]);
    const auto seed = parse_unsigned<std::uint64_t>(parts[3]);
    if (!n || *n == 0 || *n > std::numeric_limits<NodeId>::max()) {
        throw malformed("node count must be a positive integer");
    }
    if (!p || !(*p >= 0.0 && *p <= 1.0)) {
        throw malformed("probability must lie in [0, 1]");
    }
    if (!seed) {
        throw malformed("seed must be an unsigned 64-bit integer");
    }
    preset.num_nodes = *n;
    preset.probability = *p;
    preset.seed = *seed;
    if (parts.size() == 5) {
        const auto f = parse_unsigned<std::size_t>(parts[4]);
        if (!f || *f == 0) {
            throw malformed("feature length must be a positive integer");
        }
        preset.feature_length = *f;
    }
    return preset;
}

Dataset load_dataset(std::string_view argument)
{
    if (auto er = parse_er_preset(argument)) {
        Dataset ds;
        ds.graph = gen_er_graph(er->num_nodes, er->probability, er->seed);
        ds.features = gen_features(er->num_nodes, er->feature_length, er->seed);
        ds.record = {std::string(argument), "ER", er->num_nodes, er->feature_length,
                     ds.graph.num_edges(), DatasetSource::synthetic};
        return ds;
    }
    if (auto preset = find_preset(argument)) {
        throw DataError("dataset '" + std::string(argument) +
                        "' is not bundled; pass its files as --dataset EDGES,FEATURES");
    }
    const auto comma = argument.find(',');
    if (comma == std::string_view::npos) {
        throw DataError("unknown dataset '" + std::string(argument) +
                        "' (expected a preset, er:<n>:<p>:<seed>, or EDGES,FEATURES)");
    }
    const std::filesystem::path edges(std::string(argument.substr(0, comma)));
    const std::filesystem::path feats(std::string(argument.substr(comma + 1)));
    Dataset ds;
    ds.graph = load_edge_list(edges);
    ds.features = load_features(feats, ds.graph.num_nodes());
    ds.record = {edges.stem().string(), "--", ds.graph.num_nodes(), ds.features.cols(),
                 ds.graph.num_edges(), DatasetSource::file};
    return ds;
}

} // namespace gsuite
