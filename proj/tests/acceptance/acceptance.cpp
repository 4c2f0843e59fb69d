// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <gsuite/bench.hpp>
#include <gsuite/cli.hpp>
#include <gsuite/data_io.hpp>
#include <gsuite/kernels.hpp>
#include <gsuite/models.hpp>

#include "oracle.hpp"
#include "predict.hpp"
#include "timing.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace gsuite;
using M = DenseMatrix<double>;

namespace {

constexpr double kTolF64 = 1e-9;
constexpr double kTolF32 = 1e-4;
constexpr double kOracleTol = 1e-9;
constexpr double kEquivarianceTol = 1e-9;
constexpr double kSparseKernelTol = 1e-12;
constexpr double kShareSumTol = 0.1;
constexpr double kShareThreshold = 50.0;
constexpr double kCrossModelBudgetSeconds = 10.0;
constexpr std::size_t kHidden = 8;
constexpr std::uint64_t kGraphSeed = 42;

const std::vector<std::size_t> kSizes = {8, 64, 256};
const std::vector<double> kProbs = {0.05, 0.2};
const std::vector<std::size_t> kFeatureWidths = {1, 16};

struct Result {
    bool passed = true;
    std::string detail;
};

/// Tracks the first failure and a worst-case measurement for the summary.
struct Tally {
    bool passed = true;
    std::string first_failure;
    double worst = 0.0;
    bool measured = false;

    void expect(bool ok, const std::string& what)
    {
        if (!ok && passed) {
            passed = false;
            first_failure = what;
        }
    }
    void within(double diff, double tol, const std::string& what)
    {
        worst = std::max(worst, diff);
        measured = true;
        std::ostringstream s;
        s << what << " diff " << std::scientific << std::setprecision(3) << diff;
        expect(diff <= tol, s.str());
    }
    Result result(const std::string& summary) const
    {
        std::ostringstream s;
        s << summary;
        if (measured) s << "; worst " << std::scientific << std::setprecision(3) << worst;
        if (!passed) s << "; first failure: " << first_failure;
        return {passed, s.str()};
    }
};

ModelSpec two_layer(ModelKind model, CompModel comp, std::size_t f_in)
{
    ModelSpec s;
    s.model = model;
    s.comp = comp;
    s.num_layers = 2;
    s.dims = {f_in, kHidden, kHidden};
    s.seed = 7;
    return s;
}

std::string instance_name(std::size_t n, double p, std::size_t f)
{
    std::ostringstream s;
    s << "ER(" << n << "," << p << ") f=" << f;
    return s.str();
}

LayerParams<double> theta(std::size_t fi, std::size_t fo, std::uint64_t seed, double eps = 0.0)
{
    LayerParams<double> p;
    p.theta = oracle::random_matrix(fi, fo, seed);
    p.epsilon = eps;
    return p;
}

LayerParams<double> sage_weights(std::size_t fi, std::size_t fo, std::uint64_t seed)
{
    LayerParams<double> p;
    p.w1 = oracle::random_matrix(fi, fo, seed);
    p.w2 = oracle::random_matrix(fi, fo, seed + 1);
    return p;
}

// ---------------------------------------------------------------------------

Result cross_model_equivalence()
{
    Tally t;
    Tally t32;
    const auto start = std::chrono::steady_clock::now();
    std::size_t cases = 0;
    for (auto model : {ModelKind::gcn, ModelKind::gin}) {
        for (auto n : kSizes) {
            for (auto p : kProbs) {
                for (auto f : kFeatureWidths) {
                    const auto g = gen_er_graph(n, p, kGraphSeed);
                    const auto x = gen_features(n, f, kGraphSeed);
                    const auto mp = two_layer(model, CompModel::mp, f);
                    auto sp = mp;
                    sp.comp = CompModel::spmm;
                    const std::string name =
                        std::string(to_string(model)) + " " + instance_name(n, p, f);

                    const auto w64 = init_weights<double>(mp);
                    t.within(max_abs_diff(forward(mp, w64, g, x), forward(sp, w64, g, x)), kTolF64,
                             name + " f64");
                    const auto w32 = init_weights<float>(mp);
                    const auto x32 = x.cast<float>();
                    t32.within(max_abs_diff(forward(mp, w32, g, x32), forward(sp, w32, g, x32)),
                               kTolF32, name + " f32");
                    cases += 2;
                }
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.expect(secs < kCrossModelBudgetSeconds, "runtime " + std::to_string(secs) + " s");
    t.expect(t32.passed, t32.first_failure);
    std::ostringstream s;
    s << cases << " mp/spmm pairs in " << std::fixed << std::setprecision(2) << secs
      << " s; worst f64 " << std::scientific << std::setprecision(3) << t.worst << ", f32 "
      << t32.worst;
    t.measured = false;
    return t.result(s.str());
}

Result dense_oracle_equivalence()
{
    Tally t;
    std::size_t cases = 0;
    for (auto n : kSizes) {
        for (auto p : kProbs) {
            for (auto f : kFeatureWidths) {
                const auto g = gen_er_graph(n, p, kGraphSeed);
                const auto x = gen_features(n, f, kGraphSeed);
                const auto name = instance_name(n, p, f);
                for (auto act : {Activation::relu, Activation::sigmoid}) {
                    const auto pt = theta(f, kHidden, n + f);
                    const auto gcn = oracle::gcn(g, x, *pt.theta, act);
                    t.within(max_abs_diff(gcn_layer_mp(g, x, pt, act), gcn), kOracleTol,
                             "gcn_layer_mp " + name);
                    t.within(max_abs_diff(gcn_layer_spmm(g, x, pt, act), gcn), kOracleTol,
                             "gcn_layer_spmm " + name);

                    const auto pe = theta(f, kHidden, n + f + 1, 0.25);
                    const auto gin = oracle::gin(g, x, *pe.theta, 0.25, act);
                    t.within(max_abs_diff(gin_layer_mp(g, x, pe, act), gin), kOracleTol,
                             "gin_layer_mp " + name);
                    t.within(max_abs_diff(gin_layer_spmm(g, x, pe, act), gin), kOracleTol,
                             "gin_layer_spmm " + name);

                    const auto ps = sage_weights(f, kHidden, n + f + 2);
                    t.within(max_abs_diff(sage_layer_mp(g, x, ps, act),
                                          oracle::sage(g, x, *ps.w1, *ps.w2, act)),
                             kOracleTol, "sage_layer_mp " + name);
                    cases += 5;
                }
            }
        }
    }
    return t.result(std::to_string(cases) + " layer evaluations against dense equations");
}

Result permutation_equivariance()
{
    Tally t;
    constexpr std::size_t n = 64;
    constexpr std::size_t f = 6;
    const auto g = gen_er_graph(n, 0.1, kGraphSeed);
    const auto x = gen_features(n, f, kGraphSeed);
    const auto pt = theta(f, kHidden, 1);
    const auto pe = theta(f, kHidden, 2, 0.5);
    const auto ps = sage_weights(f, kHidden, 3);
    using Layer = std::function<M(const CooGraph&, const M&)>;
    const std::vector<std::pair<std::string, Layer>> layers = {
        {"gcn_layer_mp", [&](auto& gg, auto& xx) { return gcn_layer_mp(gg, xx, pt, Activation::relu); }},
        {"gcn_layer_spmm", [&](auto& gg, auto& xx) { return gcn_layer_spmm(gg, xx, pt, Activation::relu); }},
        {"gin_layer_mp", [&](auto& gg, auto& xx) { return gin_layer_mp(gg, xx, pe, Activation::relu); }},
        {"gin_layer_spmm", [&](auto& gg, auto& xx) { return gin_layer_spmm(gg, xx, pe, Activation::relu); }},
        {"sage_layer_mp", [&](auto& gg, auto& xx) { return sage_layer_mp(gg, xx, ps, Activation::relu); }},
    };
    std::vector<M> base;
    for (const auto& [_, layer] : layers) base.push_back(layer(g, x));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto perm = oracle::random_permutation(n, 1000 + s);
        const auto pg = permute_nodes(g, perm);
        const auto px = oracle::permute_rows(x, perm);
        for (std::size_t l = 0; l < layers.size(); ++l) {
            t.within(max_abs_diff(layers[l].second(pg, px), oracle::permute_rows(base[l], perm)),
                     kEquivarianceTol, layers[l].first + " perm " + std::to_string(s));
        }
    }
    return t.result("20 permutations x 5 layers on ER(64,0.1)");
}

Result format_round_trips()
{
    Tally t;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::size_t n = 1 + s % 23;
        const auto g = oracle::random_graph(n, (s * 7) % 60, s, s % 2 == 0);
        const auto csr = coo_to_csr<double>(g);
        const auto canon = csr_to_coo(csr);
        const auto again = coo_to_csr<double>(canon);
        t.expect(again == csr, "CSR changed after a round trip, graph " + std::to_string(s));
        t.expect(csr_to_coo(again) == canon, "COO not canonical, graph " + std::to_string(s));
        t.expect(coo_to_dense<double>(g) == oracle::densify(csr),
                 "dense mismatch, graph " + std::to_string(s));
    }
    return t.result("100 random multigraphs, bitwise");
}

Result kernel_oracles()
{
    Tally t;
    SplitMix64 rng(2024);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t m = 1 + rng.next() % 24;
        const std::size_t k = 1 + rng.next() % 24;
        const std::size_t n = 1 + rng.next() % 24;
        const auto a = oracle::random_matrix(m, k, 3 * s);
        const auto b = oracle::random_matrix(k, n, 3 * s + 1);
        t.expect(sgemm(a, b) == oracle::matmul(a, b),
                 "sgemm not bitwise, shape " + std::to_string(m) + "x" + std::to_string(k) + "x" +
                     std::to_string(n));
    }
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t n = 4 + s * 3;
        const auto a = coo_to_csr<double>(oracle::random_graph(n, 4 * n, 500 + s, true));
        const auto b = coo_to_csr<double>(oracle::random_graph(n, 3 * n, 600 + s, true));
        const auto x = oracle::random_matrix(n, 1 + s % 7, 700 + s);
        const auto da = oracle::densify(a);
        t.within(max_abs_diff(spmm(a, x), oracle::matmul(da, x)), kSparseKernelTol,
                 "spmm case " + std::to_string(s));
        t.within(max_abs_diff(oracle::densify(spgemm(a, b)),
                              oracle::matmul(da, oracle::densify(b))),
                 kSparseKernelTol, "spgemm case " + std::to_string(s));
    }
    return t.result("50 sgemm shapes bitwise, 20 spmm/spgemm cases");
}

Result report_arithmetic()
{
    Tally t;
    std::size_t reports = 0;
    for (const char* arg : {"er:64:0.1:42", "er:128:0.05:7:1", "er:96:0.2:3:32"}) {
        const auto ds = load_dataset(arg);
        for (auto model : {ModelKind::gcn, ModelKind::gin, ModelKind::sage}) {
            for (auto comp : {CompModel::mp, CompModel::spmm}) {
                if (model == ModelKind::sage && comp == CompModel::spmm) continue;
                const auto spec = two_layer(model, comp, ds.features.cols());
                const auto r = instrumented_run(spec, ds.record, ds.graph, ds.features);
                const auto name = std::string(to_string(model)) + "/" +
                                  std::string(to_string(comp)) + " " + arg;
                ++reports;

                double sum = 0.0;
                for (const auto& [_, v] : r.time_share) sum += v;
                t.expect(std::abs(sum - 100.0) <= kShareSumTol,
                         name + " time_share sums to " + std::to_string(sum));

                for (const auto& [k, s] : r.op_share) {
                    const double total = s.fp + s.integer + s.load + s.store;
                    t.expect(total == 0.0 || std::abs(total - 100.0) <= kShareSumTol,
                             name + " op_share[" + k + "] sums to " + std::to_string(total));
                }

                const auto expected = predict::pipeline(spec, ds.graph);
                t.expect(r.kernels.size() == expected.size() + 1, name + " kernel set");
                for (const auto& [kernel, totals] : expected) {
                    const auto* s = r.find(kernel);
                    t.expect(s != nullptr && s->calls == totals.calls &&
                                 s->counters == totals.counters,
                             name + " " + std::string(kernel_name(kernel)) + " counters");
                }

                if (comp != CompModel::mp) continue;
                const auto& sg = r.op_share.at("sgemm");
                t.expect(sg.arithmetic_fp() > kShareThreshold,
                         name + " sgemm fp share " + std::to_string(sg.arithmetic_fp()));
                for (const char* k : {"scatter", "index_select"}) {
                    const double int_share = 100.0 - r.op_share.at(k).arithmetic_fp();
                    t.expect(int_share >= kShareThreshold,
                             name + " " + k + " int share " + std::to_string(int_share));
                }
            }
        }
    }
    return t.result(std::to_string(reports) + " reports; shares over fp+int arithmetic ops");
}

int invoke(const std::vector<std::string>& args, std::string& out, std::string& err)
{
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli::main_entry(args, o, e);
    out = o.str();
    err = e.str();
    return code;
}

Result registry_fidelity()
{
    Tally t;
    std::string out;
    std::string err;
    t.expect(invoke({"datasets"}, out, err) == 0, "datasets exit status");
    const std::vector<std::vector<std::string>> expected = {
        {"Cora", "CR", "2708", "1433", "5429"},
        {"CiteSeer", "CS", "3327", "3703", "4732"},
        {"PubMed", "PB", "19717", "500", "44438"},
        {"Reddit", "RD", "232965", "602", "11606919"},
        {"LiveJournal", "LJ", "4847571", "1", "68993773"},
    };
    std::istringstream in(out);
    std::string line;
    std::getline(in, line); // header
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::vector<std::string> fields;
        for (std::string c; cells >> c;) fields.push_back(c);
        fields.resize(5);
        t.expect(row < expected.size() && fields == expected[row],
                 "row " + std::to_string(row) + ": '" + line + "'");
        ++row;
    }
    t.expect(row == expected.size(), std::to_string(row) + " rows");
    return t.result("5 registry rows compared field by field");
}

Result methodology_default()
{
    Tally t;
    t.expect(cli::parse_config({}).repeats == 3, "default repeats");
    std::string out;
    std::string err;
    t.expect(invoke({"run"}, out, err) == 0, "default run failed: " + err);
    if (!t.passed) return t.result("");
    const auto j = nlohmann::json::parse(out);
    t.expect(j["repeats"] == 3, "report repeats");
    t.expect(j["repeat_ns"].size() == 3, "per-repeat times");
    double sum = 0.0;
    for (const auto& v : j["repeat_ns"]) sum += v.get<double>();
    t.expect(std::abs(j["end_to_end_ns"].get<double>() - sum / 3.0) <= 1e-6 * sum,
             "end_to_end_ns is not the mean of the repeats");
    for (const auto& k : j["kernels"]) {
        t.expect(k.contains("mean_ns"), "kernel without a mean");
    }
    return t.result("default run reports the mean of 3 repeats");
}

Result run_determinism()
{
    Tally t;
    const auto dir = std::filesystem::temp_directory_path() / "gsuite_acceptance";
    std::filesystem::create_directories(dir);
    std::size_t configs = 0;
    for (const auto& extra : std::vector<std::vector<std::string>>{
             {"--model", "gcn", "--comp", "mp"},
             {"--model", "gin", "--comp", "spmm", "--epsilon", "0.1"},
             {"--model", "sage", "--precision", "f32", "--dataset", "er:128:0.05:9"}}) {
        std::vector<nlohmann::json> reports;
        for (const char* file : {"a.json", "b.json"}) {
            const auto path = (dir / file).string();
            std::vector<std::string> args = {"run", "--output", path};
            args.insert(args.end(), extra.begin(), extra.end());
            std::string out;
            std::string err;
            t.expect(invoke(args, out, err) == 0, "run failed: " + err);
            std::ifstream in(path);
            reports.push_back(nlohmann::json::parse(in, nullptr, false));
        }
        t.expect(!reports[0].is_discarded() && timing::strip(reports[0]) == timing::strip(reports[1]),
                 "reports differ outside timing fields");
        ++configs;
    }
    std::filesystem::remove_all(dir);
    return t.result(std::to_string(configs) + " configs run twice, timing fields excluded");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"cross-model equivalence", cross_model_equivalence},
        {"dense-oracle equivalence", dense_oracle_equivalence},
        {"permutation equivariance", permutation_equivariance},
        {"format round trips", format_round_trips},
        {"kernel oracles", kernel_oracles},
        {"report arithmetic", report_arithmetic},
        {"registry fidelity", registry_fidelity},
        {"methodology default", methodology_default},
        {"run determinism", run_determinism},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        all = all && r.passed;
        std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
                  << criteria[i].first << "): " << r.detail << std::endl;
    }
    return all ? 0 : 1;
}
