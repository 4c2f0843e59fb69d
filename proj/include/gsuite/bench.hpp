#pragma once

// Instrumented pipeline runs and their reports.
//
// A run initializes weights once, executes the forward pass `repeats` times
// and reports per-repeat means: end-to-end wall time, per-kernel wall time and
// call counts, analytic op counters, and the derived time / op shares. Time
// outside core kernels (graph preprocessing, weight init, activations,
// elementwise glue) is reported as "other". Weight init is timed into the
// first repeat.

#include <gsuite/data_io.hpp>
#include <gsuite/dense.hpp>
#include <gsuite/error.hpp>
#include <gsuite/instrument.hpp>
#include <gsuite/models.hpp>

#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <iosfwd>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

namespace gsuite {

inline constexpr const char* kReportVersion = "gsuite-report/1";

struct KernelStats {
    Kernel kernel = Kernel::other;
    std::uint64_t calls = 0;
    double mean_ns = 0.0;
    OpCounters counters;

    friend bool operator==(const KernelStats&, const KernelStats&) = default;
};

/// Percentages of one kernel's counted operations; sums to 100.
struct OpShare {
    double fp = 0.0;
    double integer = 0.0;
    double load = 0.0;
    double store = 0.0;

    /// FP fraction of arithmetic work only, fp / (fp + int), in percent.
    double arithmetic_fp() const noexcept
    {
        return fp + integer > 0.0 ? 100.0 * fp / (fp + integer) : 0.0;
    }
    friend bool operator==(const OpShare&, const OpShare&) = default;
};

struct RunReport {
    std::string version = kReportVersion;
    ModelSpec spec;
    Precision precision = Precision::f64;
    DatasetRecord dataset;
    std::size_t repeats = 0;
    double end_to_end_ns = 0.0;
    std::vector<double> repeat_ns; ///< end-to-end time of each repeat
    std::vector<KernelStats> kernels;
    std::map<std::string, double> time_share;
    std::map<std::string, OpShare> op_share;
    std::string output_digest; ///< FNV-1a of the final feature matrix bytes

    const KernelStats* find(Kernel k) const noexcept;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct RunOptions {
    std::size_t repeats = 3;
    std::size_t warmup = 0;
};

template <typename T>
struct RunOutcome {
    RunReport report;
    DenseMatrix<T> output;
};

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view s);

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

/// Serializes `r`; throws Error if the sink fails.
void emit_report(const RunReport& r, ReportFormat format, std::ostream& sink);

/// Relative comparison of two runs (b against a).
struct ComparisonSummary {
    double end_to_end_ratio = 1.0; ///< b.end_to_end / a.end_to_end
    std::map<std::string, double> time_share_delta; ///< b - a, percentage points
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;
};

ComparisonSummary compare_runs(const RunReport& a, const RunReport& b);

/// Fills time_share and op_share from kernels and end_to_end_ns.
void compute_shares(RunReport& r);

std::string digest_bytes(const void* data, std::size_t size);

template <typename T>
std::string digest(const DenseMatrix<T>& m)
{
    return digest_bytes(m.data().data(), m.data().size_bytes());
}

namespace detail {

/// Accumulates one repeat's per-kernel time, calls and counters.
class RepeatRecorder final : public KernelObserver {
public:
    struct Slot {
        std::uint64_t calls = 0;
        std::chrono::nanoseconds time{0};
        OpCounters counters;
    };

    void on_kernel(Kernel kernel, std::chrono::nanoseconds elapsed,
                   const OpCounters& counters) override
    {
        auto& s = slots_[static_cast<std::size_t>(kernel)];
        ++s.calls;
        s.time += elapsed;
        s.counters += counters;
    }

    const Slot& slot(Kernel k) const noexcept { return slots_[static_cast<std::size_t>(k)]; }
    std::chrono::nanoseconds kernel_time() const noexcept
    {
        std::chrono::nanoseconds total{0};
        for (const auto& s : slots_) {
            total += s.time;
        }
        return total;
    }
    void reset() { slots_ = {}; }

private:
    std::array<Slot, kAllKernels.size()> slots_{};
};

} // namespace detail

/// Runs the pipeline `options.repeats` times with one set of weights and
/// audits that every repeat produces bitwise-identical output and counters.
template <typename T>
RunOutcome<T> run_benchmark(const ModelSpec& spec, const DatasetRecord& dataset,
                            const CooGraph& g, const DenseMatrix<T>& x, RunOptions options = {})
{
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
    if (options.repeats < 1) {
        throw UsageError("repeats must be at least 1");
    }
    using clock = std::chrono::steady_clock;

    RunOutcome<T> outcome;
    RunReport& r = outcome.report;
    r.spec = spec;
    r.precision = std::is_same_v<T, float> ? Precision::f32 : Precision::f64;
    r.dataset = dataset;
    r.repeats = options.repeats;

    const auto init_start = clock::now();
    const auto params = init_weights<T>(spec);
    const auto init_time = clock::now() - init_start;

    for (std::size_t w = 0; w < options.warmup; ++w) {
        (void)forward(spec, params, g, x);
    }

    detail::RepeatRecorder recorder;
    std::vector<detail::RepeatRecorder> per_repeat;
    std::vector<std::chrono::nanoseconds> totals;
    for (std::size_t rep = 0; rep < options.repeats; ++rep) {
        recorder.reset();
        const auto start = clock::now();
        auto out = forward(spec, params, g, x, &recorder);
        auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start);
        if (rep == 0) {
            elapsed += std::chrono::duration_cast<std::chrono::nanoseconds>(init_time);
            outcome.output = std::move(out);
        } else if (out.rows() != outcome.output.rows() || out.cols() != outcome.output.cols() ||
                   std::memcmp(out.data().data(), outcome.output.data().data(),
                               out.data().size_bytes()) != 0) {
            throw ConsistencyError("repeat " + std::to_string(rep) +
                                   " produced output that differs from repeat 0");
        }
        for (Kernel k : kAllKernels) {
            const auto& s = recorder.slot(k);
            if (rep > 0 && (s.calls != per_repeat.front().slot(k).calls ||
                            !(s.counters == per_repeat.front().slot(k).counters))) {
                throw ConsistencyError("repeat " + std::to_string(rep) + " changed the " +
                                       std::string(kernel_name(k)) + " call pattern");
            }
        }
        per_repeat.push_back(recorder);
        totals.push_back(elapsed);
    }

    const double reps = static_cast<double>(options.repeats);
    double total_sum = 0.0;
    for (auto t : totals) {
        r.repeat_ns.push_back(static_cast<double>(t.count()));
        total_sum += static_cast<double>(t.count());
    }
    r.end_to_end_ns = total_sum / reps;

    double other_sum = 0.0;
    for (std::size_t rep = 0; rep < options.repeats; ++rep) {
        other_sum += static_cast<double>((totals[rep] - per_repeat[rep].kernel_time()).count());
    }
    for (Kernel k : kAllKernels) {
        if (k == Kernel::other) {
            r.kernels.push_back({Kernel::other, 1, other_sum / reps, {}});
            continue;
        }
        const auto& first = per_repeat.front().slot(k);
        if (first.calls == 0) {
            continue;
        }
        double time_sum = 0.0;
        for (const auto& rec : per_repeat) {
            time_sum += static_cast<double>(rec.slot(k).time.count());
        }
        r.kernels.push_back({k, first.calls, time_sum / reps, first.counters});
    }
    r.output_digest = digest(outcome.output);
    compute_shares(r);
    return outcome;
}

template <typename T>
RunReport instrumented_run(const ModelSpec& spec, const DatasetRecord& dataset, const CooGraph& g,
                           const DenseMatrix<T>& x, RunOptions options = {})
{
    return run_benchmark(spec, dataset, g, x, options).report;
}

} // namespace gsuite
