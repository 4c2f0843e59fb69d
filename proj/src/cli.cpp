#include <gsuite/cli.hpp>
#include <gsuite/data_io.hpp>
#include <gsuite/reference.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace gsuite::cli {

namespace {

constexpr std::string_view kDefaultConfig = R"(# gsuite defaults
model = gcn
comp = mp
dataset = er:64:0.1:42
layers = 2
hidden = 16
epsilon = 0.0
activation = relu
repeats = 3
seed = 0
precision = f64
output = -
format = json
warmup = 0
)";

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

template <typename Int>
Int parse_count(const Settings& s, const std::string& key, Int minimum)
{
    const std::string& text = s.at(key);
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < minimum) {
        throw UsageError("invalid value for " + key + ": '" + text + "' (expected an integer >= " +
                         std::to_string(minimum) + ")");
    }
    return value;
}

double parse_real(const Settings& s, const std::string& key)
{
    const std::string& text = s.at(key);
    double value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw UsageError("invalid value for " + key + ": '" + text + "' (expected a real number)");
    }
    return value;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Registers every config key as a --flag that records into `flags`.
void add_config_flags(CLI::App& app, Settings& flags)
{
    for (const auto& key : config_keys()) {
        app.add_option_function<std::string>(
            "--" + key, [&flags, key](const std::string& v) { flags[key] = v; });
    }
    app.add_option_function<std::string>("--backend", [](const std::string&) {
        throw UsageError("--backend is reserved for framework interop and not supported yet");
    });
}

void parse_args(CLI::App& app, const std::vector<std::string>& args)
{
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const UsageError*>(&e) != nullptr) return kUsageError;
    if (dynamic_cast<const ConsistencyError*>(&e) != nullptr) return kConsistencyError;
    return kDataError;
}

void write_output(const std::string& payload, const std::string& output, std::ostream& out)
{
    if (output == "-") {
        out << payload;
        out.flush();
        if (!out) {
            throw Error("failed to write report to stdout");
        }
        return;
    }
    // Write next to the target and rename so a failed write leaves no file.
    const std::filesystem::path target(output);
    std::filesystem::path temp = target;
    temp += ".partial";
    {
        std::ofstream file(temp, std::ios::binary | std::ios::trunc);
        file << payload;
        file.flush();
        if (!file) {
            std::error_code ignored;
            std::filesystem::remove(temp, ignored);
            throw Error("cannot write report to '" + output + "'");
        }
    }
    std::filesystem::rename(temp, target);
}

template <typename T>
RunReport execute(const CliConfig& config, const Dataset& ds)
{
    const ModelSpec spec = build_spec(config, ds.features.cols());
    const auto x = ds.features.template cast<T>();
    return instrumented_run<T>(spec, ds.record, ds.graph, x, {config.repeats, config.warmup});
}

struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

template <typename T>
std::vector<CheckLine> run_checks(const CliConfig& config, const Dataset& ds)
{
    const double tol = std::is_same_v<T, float> ? 1e-4 : 1e-9;
    const ModelSpec spec = build_spec(config, ds.features.cols());
    const auto x = ds.features.template cast<T>();
    const auto params = init_weights<T>(spec);
    std::vector<CheckLine> lines;

    const auto first = forward(spec, params, ds.graph, x);
    const auto second = forward(spec, params, ds.graph, x);
    lines.push_back({"determinism", first == second, "two forward passes compared bitwise"});

    if (spec.model != ModelKind::sage) {
        ModelSpec other = spec;
        other.comp = spec.comp == CompModel::mp ? CompModel::spmm : CompModel::mp;
        const double diff = max_abs_diff(first, forward(other, params, ds.graph, x));
        std::ostringstream detail;
        detail << "mp vs spmm max abs diff " << std::scientific << std::setprecision(3) << diff
               << " (tol " << tol << ")";
        lines.push_back({"cross-model", diff <= tol, detail.str()});
    }

    if (ds.graph.num_nodes() <= kDefaultDenseLimit) {
        const auto expected = reference::forward(spec, reference::widen(params), ds.graph,
                                                 x.template cast<double>());
        const double diff = max_abs_diff(first.template cast<double>(), expected);
        std::ostringstream detail;
        detail << "dense reference max abs diff " << std::scientific << std::setprecision(3)
               << diff << " (tol " << tol << ")";
        lines.push_back({"dense-oracle", diff <= tol, detail.str()});
    } else {
        lines.push_back({"dense-oracle", true, "skipped: graph exceeds the dense limit"});
    }
    return lines;
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "model",  "comp",      "dataset", "layers", "hidden", "epsilon", "activation",
        "repeats", "seed",     "precision", "output", "format", "warmup",
    };
    return keys;
}

std::string_view default_config_text()
{
    return kDefaultConfig;
}

Settings parse_config_text(std::string_view text, std::string_view origin)
{
    Settings out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(where + "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw UsageError(where + "unknown key '" + key + "'");
        }
        if (!out.emplace(key, value).second) {
            throw UsageError(where + "duplicate key '" + key + "'");
        }
    }
    return out;
}

CliConfig resolve_config(const Settings& flags, const Settings& file)
{
    Settings merged = parse_config_text(kDefaultConfig, "<defaults>");
    for (const auto& [k, v] : file) merged[k] = v;
    for (const auto& [k, v] : flags) {
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            throw UsageError("unknown flag --" + k);
        }
        merged[k] = v;
    }

    CliConfig c;
    c.model = parse_model(merged.at("model"));
    c.comp = parse_comp_model(merged.at("comp"));
    if (c.model == ModelKind::sage && c.comp == CompModel::spmm) {
        throw UsageError("invalid combination --model sage --comp spmm: GraphSAGE is implemented "
                         "only under the mp computational model (no SpMM formulation exists)");
    }
    c.dataset = merged.at("dataset");
    if (c.dataset.empty()) {
        throw UsageError("dataset must not be empty");
    }
    try {
        (void)parse_er_preset(c.dataset);
    } catch (const DataError& e) {
        throw UsageError(e.what());
    }
    c.layers = parse_count<std::size_t>(merged, "layers", 1);
    c.hidden = parse_count<std::size_t>(merged, "hidden", 1);
    c.epsilon = parse_real(merged, "epsilon");
    c.activation = parse_activation(merged.at("activation"));
    c.repeats = parse_count<std::size_t>(merged, "repeats", 1);
    c.seed = parse_count<std::uint64_t>(merged, "seed", 0);
    c.precision = parse_precision(merged.at("precision"));
    c.output = merged.at("output");
    if (c.output.empty()) {
        throw UsageError("output must be a path or '-'");
    }
    c.format = parse_report_format(merged.at("format"));
    c.warmup = parse_count<std::size_t>(merged, "warmup", 0);
    return c;
}

CliConfig parse_config(const std::vector<std::string>& args, std::string_view config_text)
{
    Settings flags;
    CLI::App app{"gsuite settings"};
    add_config_flags(app, flags);
    try {
        parse_args(app, args);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    return resolve_config(flags, parse_config_text(config_text));
}

ModelSpec build_spec(const CliConfig& config, std::size_t feature_length)
{
    ModelSpec spec;
    spec.model = config.model;
    spec.comp = config.comp;
    spec.num_layers = config.layers;
    spec.dims.assign(config.layers + 1, config.hidden);
    spec.dims[0] = feature_length;
    spec.activation = config.activation;
    spec.epsilon = config.epsilon;
    spec.seed = config.seed;
    spec.validate();
    return spec;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        const Dataset ds = load_dataset(config.dataset);
        const RunReport report = config.precision == Precision::f32
                                     ? execute<float>(config, ds)
                                     : execute<double>(config, ds);
        std::ostringstream payload;
        emit_report(report, config.format, payload);
        write_output(payload.str(), config.output, out);
        return kSuccess;
    } catch (const std::exception& e) {
        err << "gsuite run: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

int check(const CliConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        const Dataset ds = load_dataset(config.dataset);
        const auto lines = config.precision == Precision::f32 ? run_checks<float>(config, ds)
                                                              : run_checks<double>(config, ds);
        bool ok = true;
        for (const auto& l : lines) {
            out << (l.passed ? "PASS " : "FAIL ") << l.name << ": " << l.detail << '\n';
            ok = ok && l.passed;
        }
        return ok ? kSuccess : kConsistencyError;
    } catch (const std::exception& e) {
        err << "gsuite check: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

int datasets(std::ostream& out)
{
    out << std::left << std::setw(13) << "name" << std::setw(7) << "short" << std::right
        << std::setw(10) << "nodes" << std::setw(16) << "feature_length" << std::setw(12)
        << "edges" << "  source\n";
    for (const auto& r : registry()) {
        out << std::left << std::setw(13) << r.name << std::setw(7) << r.short_form << std::right
            << std::setw(10) << r.num_nodes << std::setw(16) << r.feature_length << std::setw(12)
            << r.num_edges << "  " << to_string(r.source) << '\n';
    }
    return kSuccess;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::optional<std::string> env_config)
{
    CLI::App app{"GNN inference kernels and benchmark suite", "gsuite"};
    app.require_subcommand(1);
    Settings flags;
    std::string config_path;

    auto* run_cmd = app.add_subcommand("run", "benchmark a pipeline and emit a report");
    auto* check_cmd = app.add_subcommand("check", "verify mp/spmm and dense-reference agreement");
    app.add_subcommand("datasets", "list the dataset registry");
    for (auto* sub : {run_cmd, check_cmd}) {
        add_config_flags(*sub, flags);
        sub->add_option("--config", config_path, "config file (key = value lines)");
    }

    try {
        parse_args(app, args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    } catch (const UsageError& e) {
        err << "gsuite: " << e.what() << '\n';
        return kUsageError;
    }

    if (app.got_subcommand("datasets")) {
        return datasets(out);
    }

    CliConfig config;
    try {
        std::string text;
        if (!config_path.empty()) {
            text = read_text_file(config_path);
        } else if (env_config && !env_config->empty()) {
            text = read_text_file(*env_config);
        }
        config = resolve_config(flags, parse_config_text(text, config_path.empty()
                                                                    ? "GSUITE_CONFIG"
                                                                    : config_path));
    } catch (const std::exception& e) {
        err << "gsuite: " << e.what() << '\n';
        return kUsageError;
    }
    return run_cmd->parsed() ? run(config, out, err) : check(config, out, err);
}

} // namespace gsuite::cli
