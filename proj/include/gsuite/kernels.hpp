#pragma once

// Core kernels: index_select and scatter (message passing), sgemm, and the
// sparse products spmm (sparse x dense) and spgemm (sparse x sparse).
//
// Every kernel optionally adds closed-form operation counts to an
// OpCounters sink. The formulas are part of each kernel's contract; they are
// an analytic stand-in for profiled FP / INT / load / store instruction
// classes, not measurements.
//
// Accumulation order is fixed: contributions to one output element are
// summed in ascending edge index (scatter), ascending inner index (sgemm) or
// CSR storage order (spmm, spgemm).

#include <gsuite/dense.hpp>
#include <gsuite/error.hpp>
#include <gsuite/graph.hpp>

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsuite {

enum class ReduceOp { sum, mean, max };

struct OpCounters {
    std::uint64_t fp_ops = 0;
    std::uint64_t int_ops = 0;
    std::uint64_t loads = 0;
    std::uint64_t stores = 0;

    OpCounters& operator+=(const OpCounters& o) noexcept
    {
        fp_ops += o.fp_ops;
        int_ops += o.int_ops;
        loads += o.loads;
        stores += o.stores;
        return *this;
    }
    friend OpCounters operator+(OpCounters a, const OpCounters& b) noexcept { return a += b; }
    friend bool operator==(const OpCounters&, const OpCounters&) = default;

    std::uint64_t total() const noexcept { return fp_ops + int_ops + loads + stores; }
};

// Closed-form counter models, shared by the kernels and by anyone predicting
// a pipeline's totals from its shapes.
namespace counters {

inline OpCounters index_select(std::uint64_t e, std::uint64_t f)
{
    return {0, e * (f + 1), e * (f + 1), e * f};
}

inline OpCounters scatter(std::uint64_t e, std::uint64_t f, std::uint64_t n, ReduceOp op)
{
    const std::uint64_t fp = e * f + (op == ReduceOp::mean ? n * f : 0);
    return {fp, e * (f + 1), e * (f + 1), e * f};
}

inline OpCounters sgemm(std::uint64_t m, std::uint64_t k, std::uint64_t n)
{
    return {2 * m * k * n, m * n, 2 * m * k * n, m * n};
}

inline OpCounters spmm(std::uint64_t rows, std::uint64_t nnz, std::uint64_t f)
{
    return {2 * nnz * f, nnz * (f + 1), nnz * (f + 1) + nnz * f, rows * f};
}

/// products = sum over stored a(i,k) of nnz(b row k).
inline OpCounters spgemm(std::uint64_t nnz_a, std::uint64_t products, std::uint64_t nnz_c)
{
    return {2 * products, nnz_a + products, 2 * nnz_a + 2 * products, 2 * nnz_c};
}

} // namespace counters

namespace detail {

inline void add(OpCounters* sink, const OpCounters& c)
{
    if (sink != nullptr) {
        *sink += c;
    }
}

inline void check_index(std::span<const NodeId> index, std::size_t bound, std::string_view what)
{
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] >= bound) {
            throw IndexError(std::string(what) + ": index[" + std::to_string(k) + "] = " +
                             std::to_string(index[k]) + " is out of range for " +
                             std::to_string(bound) + " rows");
        }
    }
}

} // namespace detail

/// Gathers rows: out[k] = x[index[k]].
template <typename T>
DenseMatrix<T> index_select(const DenseMatrix<T>& x, std::span<const NodeId> index,
                            OpCounters* counters = nullptr)
{
    detail::check_index(index, x.rows(), "index_select");
    const std::size_t f = x.cols();
    DenseMatrix<T> out(index.size(), f);
    for (std::size_t k = 0; k < index.size(); ++k) {
        auto from = x.row(index[k]);
        std::copy(from.begin(), from.end(), out.row(k).begin());
    }
    detail::add(counters, counters::index_select(index.size(), f));
    return out;
}

/// Segment reduction: out[i] reduces every src row k with index[k] == i.
/// Destinations that receive nothing are zero for every ReduceOp.
template <typename T>
DenseMatrix<T> scatter(const DenseMatrix<T>& src, std::span<const NodeId> index, std::size_t n,
                       ReduceOp op, OpCounters* counters = nullptr)
{
    if (index.size() != src.rows()) {
        throw ShapeError("scatter: index has " + std::to_string(index.size()) +
                         " entries for source " + src.shape_string());
    }
    detail::check_index(index, n, "scatter");
    const std::size_t f = src.cols();
    DenseMatrix<T> out(n, f);

    switch (op) {
    case ReduceOp::sum:
    case ReduceOp::mean:
        for (std::size_t k = 0; k < index.size(); ++k) {
            auto to = out.row(index[k]);
            auto from = src.row(k);
            for (std::size_t j = 0; j < f; ++j) {
                to[j] += from[j];
            }
        }
        if (op == ReduceOp::mean) {
            std::vector<std::size_t> count(n, 0);
            for (NodeId i : index) {
                ++count[i];
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (count[i] == 0) {
                    continue;
                }
                const T c = static_cast<T>(count[i]);
                for (T& v : out.row(i)) {
                    v /= c;
                }
            }
        }
        break;
    case ReduceOp::max: {
        std::vector<bool> seen(n, false);
        for (std::size_t k = 0; k < index.size(); ++k) {
            const NodeId i = index[k];
            auto to = out.row(i);
            auto from = src.row(k);
            if (!seen[i]) {
                std::copy(from.begin(), from.end(), to.begin());
                seen[i] = true;
                continue;
            }
            for (std::size_t j = 0; j < f; ++j) {
                to[j] = std::max(to[j], from[j]);
            }
        }
        break;
    }
    }
    detail::add(counters, counters::scatter(index.size(), f, n, op));
    return out;
}

/// Dense product a * b.
template <typename T>
DenseMatrix<T> sgemm(const DenseMatrix<T>& a, const DenseMatrix<T>& b,
                     OpCounters* counters = nullptr)
{
    if (a.cols() != b.rows()) {
        throw ShapeError("sgemm: cannot multiply " + a.shape_string() + " by " +
                         b.shape_string());
    }
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    const std::size_t n = b.cols();
    DenseMatrix<T> out(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        auto acc = out.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const T aip = a(i, p);
            auto brow = b.row(p);
            for (std::size_t j = 0; j < n; ++j) {
                acc[j] += aip * brow[j];
            }
        }
    }
    detail::add(counters, counters::sgemm(m, k, n));
    return out;
}

/// Sparse-dense product a * x.
template <typename T>
DenseMatrix<T> spmm(const CsrMatrix<T>& a, const DenseMatrix<T>& x, OpCounters* counters = nullptr)
{
    if (a.cols() != x.rows()) {
        throw ShapeError("spmm: cannot multiply sparse " + a.shape_string() + " by dense " +
                         x.shape_string());
    }
    const std::size_t f = x.cols();
    DenseMatrix<T> out(a.rows(), f);
    auto ptr = a.row_ptr();
    auto col = a.col_idx();
    auto val = a.values();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto acc = out.row(i);
        for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
            const T w = val[k];
            auto xrow = x.row(col[k]);
            for (std::size_t j = 0; j < f; ++j) {
                acc[j] += w * xrow[j];
            }
        }
    }
    detail::add(counters, counters::spmm(a.rows(), a.nnz(), f));
    return out;
}

/// Sparse-sparse product (row-wise sparse accumulator). Entries that cancel to
/// exactly zero stay in the structure.
template <typename T>
CsrMatrix<T> spgemm(const CsrMatrix<T>& a, const CsrMatrix<T>& b, OpCounters* counters = nullptr)
{
    if (a.cols() != b.rows()) {
        throw ShapeError("spgemm: cannot multiply " + a.shape_string() + " by " +
                         b.shape_string());
    }
    const std::size_t ncols = b.cols();
    auto aptr = a.row_ptr();
    auto bptr = b.row_ptr();

    std::vector<T> accum(ncols, T(0));
    std::vector<bool> occupied(ncols, false);
    std::vector<NodeId> touched;

    std::vector<std::size_t> row_ptr(a.rows() + 1, 0);
    std::vector<NodeId> col_idx;
    std::vector<T> values;
    std::uint64_t products = 0;

    for (std::size_t i = 0; i < a.rows(); ++i) {
        touched.clear();
        for (std::size_t ka = aptr[i]; ka < aptr[i + 1]; ++ka) {
            const NodeId mid = a.col_idx()[ka];
            const T av = a.values()[ka];
            for (std::size_t kb = bptr[mid]; kb < bptr[mid + 1]; ++kb) {
                const NodeId j = b.col_idx()[kb];
                if (!occupied[j]) {
                    occupied[j] = true;
                    touched.push_back(j);
                }
                accum[j] += av * b.values()[kb];
                ++products;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (NodeId j : touched) {
            col_idx.push_back(j);
            values.push_back(accum[j]);
            accum[j] = T(0);
            occupied[j] = false;
        }
        row_ptr[i + 1] = col_idx.size();
    }
    detail::add(counters, counters::spgemm(a.nnz(), products, col_idx.size()));
    return CsrMatrix<T>(a.rows(), ncols, std::move(row_ptr), std::move(col_idx),
                        std::move(values));
}

} // namespace gsuite
