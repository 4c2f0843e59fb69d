#include <gsuite/bench.hpp>
#include <gsuite/rng.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace gsuite {

using nlohmann::json;

const KernelStats* RunReport::find(Kernel k) const noexcept
{
    for (const auto& s : kernels) {
        if (s.kernel == k) {
            return &s;
        }
    }
    return nullptr;
}

ReportFormat parse_report_format(std::string_view s)
{
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw UsageError("invalid format '" + std::string(s) + "' (expected json|csv)");
}

std::string digest_bytes(const void* data, std::size_t size)
{
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = fnv1a64("");
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

void compute_shares(RunReport& r)
{
    r.time_share.clear();
    r.op_share.clear();
    for (const auto& s : r.kernels) {
        const std::string name(kernel_name(s.kernel));
        r.time_share[name] = r.end_to_end_ns > 0.0 ? 100.0 * s.mean_ns / r.end_to_end_ns
                             : s.kernel == Kernel::other ? 100.0
                                                         : 0.0;
        const double total = static_cast<double>(s.counters.total());
        if (total > 0.0) {
            r.op_share[name] = {100.0 * static_cast<double>(s.counters.fp_ops) / total,
                                100.0 * static_cast<double>(s.counters.int_ops) / total,
                                100.0 * static_cast<double>(s.counters.loads) / total,
                                100.0 * static_cast<double>(s.counters.stores) / total};
        }
    }
}

json to_json(const RunReport& r)
{
    json spec = {
        {"model", to_string(r.spec.model)},
        {"comp", to_string(r.spec.comp)},
        {"layers", r.spec.num_layers},
        {"dims", r.spec.dims},
        {"activation", to_string(r.spec.activation)},
        {"epsilon", r.spec.epsilon},
        {"seed", r.spec.seed},
        {"precision", to_string(r.precision)},
    };
    json dataset = {
        {"name", r.dataset.name},
        {"short_form", r.dataset.short_form},
        {"num_nodes", r.dataset.num_nodes},
        {"feature_length", r.dataset.feature_length},
        {"num_edges", r.dataset.num_edges},
        {"source", to_string(r.dataset.source)},
    };
    json kernels = json::array();
    for (const auto& s : r.kernels) {
        kernels.push_back({
            {"name", kernel_name(s.kernel)},
            {"calls", s.calls},
            {"mean_ns", s.mean_ns},
            {"fp_ops", s.counters.fp_ops},
            {"int_ops", s.counters.int_ops},
            {"loads", s.counters.loads},
            {"stores", s.counters.stores},
        });
    }
    json op_share = json::object();
    for (const auto& [name, share] : r.op_share) {
        op_share[name] = {
            {"fp", share.fp}, {"int", share.integer}, {"load", share.load}, {"store", share.store}};
    }
    return json{
        {"version", r.version},
        {"spec", spec},
        {"dataset", dataset},
        {"repeats", r.repeats},
        {"end_to_end_ns", r.end_to_end_ns},
        {"repeat_ns", r.repeat_ns},
        {"kernels", kernels},
        {"time_share", r.time_share},
        {"op_share", op_share},
        {"output_digest", r.output_digest},
    };
}

namespace {

DatasetSource parse_source(std::string_view s)
{
    if (s == "file") return DatasetSource::file;
    if (s == "synthetic") return DatasetSource::synthetic;
    throw SchemaError("unknown dataset source '" + std::string(s) + "'");
}

} // namespace

RunReport report_from_json(const json& j)
{
    RunReport r;
    try {
        r.version = j.at("version").get<std::string>();
        if (r.version != kReportVersion) {
            throw SchemaError("report version '" + r.version + "' is not " + kReportVersion);
        }
        const auto& spec = j.at("spec");
        r.spec.model = parse_model(spec.at("model").get<std::string>());
        r.spec.comp = parse_comp_model(spec.at("comp").get<std::string>());
        r.spec.num_layers = spec.at("layers").get<std::size_t>();
        r.spec.dims = spec.at("dims").get<std::vector<std::size_t>>();
        r.spec.activation = parse_activation(spec.at("activation").get<std::string>());
        r.spec.epsilon = spec.at("epsilon").get<double>();
        r.spec.seed = spec.at("seed").get<std::uint64_t>();
        r.precision = parse_precision(spec.at("precision").get<std::string>());

        const auto& ds = j.at("dataset");
        r.dataset.name = ds.at("name").get<std::string>();
        r.dataset.short_form = ds.at("short_form").get<std::string>();
        r.dataset.num_nodes = ds.at("num_nodes").get<std::size_t>();
        r.dataset.feature_length = ds.at("feature_length").get<std::size_t>();
        r.dataset.num_edges = ds.at("num_edges").get<std::size_t>();
        r.dataset.source = parse_source(ds.at("source").get<std::string>());

        r.repeats = j.at("repeats").get<std::size_t>();
        r.end_to_end_ns = j.at("end_to_end_ns").get<double>();
        r.repeat_ns = j.at("repeat_ns").get<std::vector<double>>();
        for (const auto& k : j.at("kernels")) {
            const auto name = k.at("name").get<std::string>();
            const auto kind = kernel_from_name(name);
            if (!kind) {
                throw SchemaError("unknown kernel '" + name + "'");
            }
            r.kernels.push_back({*kind,
                                 k.at("calls").get<std::uint64_t>(),
                                 k.at("mean_ns").get<double>(),
                                 {k.at("fp_ops").get<std::uint64_t>(),
                                  k.at("int_ops").get<std::uint64_t>(),
                                  k.at("loads").get<std::uint64_t>(),
                                  k.at("stores").get<std::uint64_t>()}});
        }
        r.time_share = j.at("time_share").get<std::map<std::string, double>>();
        for (const auto& [name, share] : j.at("op_share").items()) {
            r.op_share[name] = {share.at("fp").get<double>(), share.at("int").get<double>(),
                                share.at("load").get<double>(), share.at("store").get<double>()};
        }
        r.output_digest = j.at("output_digest").get<std::string>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed report: ") + e.what());
    } catch (const UsageError& e) {
        throw SchemaError(std::string("malformed report: ") + e.what());
    }
    return r;
}

void emit_report(const RunReport& r, ReportFormat format, std::ostream& sink)
{
    if (format == ReportFormat::json) {
        sink << to_json(r).dump(2) << '\n';
    } else {
        sink << "kernel,calls,mean_ns,time_share_pct,fp_ops,int_ops,loads,stores\n";
        for (const auto& s : r.kernels) {
            const std::string name(kernel_name(s.kernel));
            const auto share = r.time_share.find(name);
            std::ostringstream row;
            row << name << ',' << s.calls << ',' << std::fixed << std::setprecision(1) << s.mean_ns
                << ',' << std::setprecision(4)
                << (share == r.time_share.end() ? 0.0 : share->second) << ','
                << s.counters.fp_ops << ',' << s.counters.int_ops << ',' << s.counters.loads << ','
                << s.counters.stores << '\n';
            sink << row.str();
        }
    }
    sink.flush();
    if (!sink) {
        throw Error("failed to write report");
    }
}

ComparisonSummary compare_runs(const RunReport& a, const RunReport& b)
{
    if (a.version != b.version) {
        throw SchemaError("cannot compare report versions '" + a.version + "' and '" + b.version +
                          "'");
    }
    ComparisonSummary out;
    out.end_to_end_ratio = a.end_to_end_ns > 0.0 ? b.end_to_end_ns / a.end_to_end_ns
                           : b.end_to_end_ns > 0.0 ? std::numeric_limits<double>::infinity()
                                                   : 1.0;
    std::set<std::string> names;
    for (const auto& [name, _] : a.time_share) names.insert(name);
    for (const auto& [name, _] : b.time_share) names.insert(name);
    for (const auto& name : names) {
        const auto ia = a.time_share.find(name);
        const auto ib = b.time_share.find(name);
        const double va = ia == a.time_share.end() ? 0.0 : ia->second;
        const double vb = ib == b.time_share.end() ? 0.0 : ib->second;
        out.time_share_delta[name] = vb - va;
        if (ia == a.time_share.end()) out.only_in_b.push_back(name);
        if (ib == b.time_share.end()) out.only_in_a.push_back(name);
    }
    return out;
}

} // namespace gsuite
