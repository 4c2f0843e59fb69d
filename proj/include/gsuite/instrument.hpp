#pragma once

#include <gsuite/kernels.hpp>

#include <array>
#include <chrono>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>

namespace gsuite {

/// Timing categories. `other` is all pipeline time spent outside core kernels.
enum class Kernel { index_select, scatter, sgemm, spmm, spgemm, other };

inline constexpr std::array<Kernel, 6> kAllKernels = {Kernel::index_select, Kernel::scatter,
                                                      Kernel::sgemm,        Kernel::spmm,
                                                      Kernel::spgemm,       Kernel::other};

constexpr std::string_view kernel_name(Kernel k) noexcept
{
    switch (k) {
    case Kernel::index_select: return "index_select";
    case Kernel::scatter: return "scatter";
    case Kernel::sgemm: return "sgemm";
    case Kernel::spmm: return "spmm";
    case Kernel::spgemm: return "spgemm";
    case Kernel::other: return "other";
    }
    return "other";
}

inline std::optional<Kernel> kernel_from_name(std::string_view name) noexcept
{
    for (Kernel k : kAllKernels) {
        if (kernel_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

/// Receives one callback per core-kernel invocation.
class KernelObserver {
public:
    virtual ~KernelObserver() = default;
    virtual void on_kernel(Kernel kernel, std::chrono::nanoseconds elapsed,
                           const OpCounters& counters) = 0;
};

/// Runs `fn(OpCounters*)`, timing it and reporting to `observer` when one is
/// attached.
template <typename Fn>
auto invoke_kernel(KernelObserver* observer, Kernel kernel, Fn&& fn)
{
    if (observer == nullptr) {
        return std::forward<Fn>(fn)(nullptr);
    }
    OpCounters counters;
    const auto start = std::chrono::steady_clock::now();
    auto result = std::forward<Fn>(fn)(&counters);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    observer->on_kernel(kernel, std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed),
                        counters);
    return result;
}

} // namespace gsuite
