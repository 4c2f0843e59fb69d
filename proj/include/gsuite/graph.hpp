#pragma once

// Graph representations (COO, CSR, dense) and the structural preprocessing
// shared by the message-passing and sparse-matrix pipelines.
//
// Orientation: messages flow src -> dst, so adjacency row i lists the
// in-neighbors of node i and A[dst][src] holds the (summed) edge weight.

#include <gsuite/dense.hpp>
#include <gsuite/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsuite {

using NodeId = std::uint32_t;

/// Node-count ceiling for dense materialization (test-oracle path only).
inline constexpr std::size_t kDefaultDenseLimit = 4096;

/// Edge list. Duplicate (src, dst) pairs are allowed and count independently.
/// Without explicit weights every edge has weight 1.
class CooGraph {
public:
    CooGraph() = default;
    CooGraph(std::size_t num_nodes, std::vector<NodeId> src, std::vector<NodeId> dst,
             std::optional<std::vector<double>> weights = std::nullopt);

    std::size_t num_nodes() const noexcept { return num_nodes_; }
    std::size_t num_edges() const noexcept { return src_.size(); }

    std::span<const NodeId> src() const noexcept { return src_; }
    std::span<const NodeId> dst() const noexcept { return dst_; }

    bool has_weights() const noexcept { return weights_.has_value(); }
    const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }
    double weight(std::size_t k) const noexcept { return weights_ ? (*weights_)[k] : 1.0; }

    friend bool operator==(const CooGraph&, const CooGraph&) = default;

private:
    std::size_t num_nodes_ = 0;
    std::vector<NodeId> src_;
    std::vector<NodeId> dst_;
    std::optional<std::vector<double>> weights_;
};

/// Compressed sparse row matrix in canonical form: strictly increasing
/// columns within each row, no duplicate coordinates.
template <typename T>
class CsrMatrix {
public:
    using value_type = T;

    CsrMatrix() : row_ptr_{0} {}

    CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
              std::vector<NodeId> col_idx, std::vector<T> values)
        : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
          values_(std::move(values))
    {
        validate();
    }

    static CsrMatrix identity(std::size_t n)
    {
        std::vector<T> ones(n, T(1));
        return diagonal(ones);
    }

    static CsrMatrix diagonal(std::span<const T> diag)
    {
        const std::size_t n = diag.size();
        std::vector<std::size_t> ptr(n + 1);
        std::iota(ptr.begin(), ptr.end(), std::size_t{0});
        std::vector<NodeId> cols(n);
        std::iota(cols.begin(), cols.end(), NodeId{0});
        return CsrMatrix(n, n, std::move(ptr), std::move(cols),
                         std::vector<T>(diag.begin(), diag.end()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return col_idx_.size(); }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const NodeId> col_idx() const noexcept { return col_idx_; }
    std::span<const T> values() const noexcept { return values_; }

    std::string shape_string() const
    {
        return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
    }

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
    void validate() const
    {
        if (row_ptr_.size() != rows_ + 1) {
            throw FormatError("csr: row_ptr length must be rows+1");
        }
        if (col_idx_.size() != values_.size()) {
            throw FormatError("csr: col_idx and values differ in length");
        }
        if (row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size()) {
            throw FormatError("csr: row_ptr must start at 0 and end at nnz");
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            if (row_ptr_[i] > row_ptr_[i + 1]) {
                throw FormatError("csr: row_ptr decreases at row " + std::to_string(i));
            }
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                if (col_idx_[k] >= cols_) {
                    throw FormatError("csr: column index out of range in row " +
                                      std::to_string(i));
                }
                if (k > row_ptr_[i] && col_idx_[k - 1] >= col_idx_[k]) {
                    throw FormatError("csr: columns not strictly increasing in row " +
                                      std::to_string(i));
                }
            }
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<NodeId> col_idx_;
    std::vector<T> values_;
};

/// Weighted in-degree per node.
struct DegreeVector {
    std::vector<double> degrees;

    std::size_t size() const noexcept { return degrees.size(); }
    double operator[](std::size_t i) const noexcept { return degrees[i]; }
    friend bool operator==(const DegreeVector&, const DegreeVector&) = default;
};

enum class Orientation { by_dst_rows };

/// Canonical CSR of the adjacency matrix; duplicates are summed in
/// ascending edge order.
template <typename T>
CsrMatrix<T> coo_to_csr(const CooGraph& g, Orientation = Orientation::by_dst_rows)
{
    const std::size_t n = g.num_nodes();
    const std::size_t e = g.num_edges();
    auto src = g.src();
    auto dst = g.dst();

    // Bucket edges by destination row, keeping edge order inside each bucket.
    std::vector<std::size_t> start(n + 1, 0);
    for (std::size_t k = 0; k < e; ++k) {
        ++start[dst[k] + 1];
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::size_t> order(e);
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t k = 0; k < e; ++k) {
            order[fill[dst[k]]++] = k;
        }
    }

    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<NodeId> col_idx;
    std::vector<T> values;
    col_idx.reserve(e);
    values.reserve(e);
    for (std::size_t i = 0; i < n; ++i) {
        auto first = order.begin() + static_cast<std::ptrdiff_t>(start[i]);
        auto last = order.begin() + static_cast<std::ptrdiff_t>(start[i + 1]);
        std::stable_sort(first, last, [&](std::size_t a, std::size_t b) { return src[a] < src[b]; });
        for (auto it = first; it != last; ++it) {
            const NodeId c = src[*it];
            const T w = static_cast<T>(g.weight(*it));
            if (col_idx.size() > row_ptr[i] && col_idx.back() == c) {
                values.back() += w;
            } else {
                col_idx.push_back(c);
                values.push_back(w);
            }
        }
        row_ptr[i + 1] = col_idx.size();
    }
    return CsrMatrix<T>(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

/// Inverse of coo_to_csr for square matrices: one weighted edge per stored entry,
/// emitted in row-major storage order.
template <typename T>
CooGraph csr_to_coo(const CsrMatrix<T>& a)
{
    if (a.rows() != a.cols()) {
        throw FormatError("csr_to_coo: adjacency must be square, got " + a.shape_string());
    }
    std::vector<NodeId> src(a.col_idx().begin(), a.col_idx().end());
    std::vector<NodeId> dst(a.nnz());
    std::vector<double> w(a.values().begin(), a.values().end());
    auto ptr = a.row_ptr();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::fill(dst.begin() + static_cast<std::ptrdiff_t>(ptr[i]),
                  dst.begin() + static_cast<std::ptrdiff_t>(ptr[i + 1]), static_cast<NodeId>(i));
    }
    return CooGraph(a.rows(), std::move(src), std::move(dst), std::move(w));
}

inline void check_dense_capacity(std::size_t n, std::size_t limit)
{
    if (n > limit) {
        throw CapacityError("dense materialization of " + std::to_string(n) +
                            " nodes exceeds the limit of " + std::to_string(limit));
    }
}

/// Dense [n x n] adjacency with entry [dst][src] = summed weight.
template <typename T>
DenseMatrix<T> coo_to_dense(const CooGraph& g, std::size_t limit = kDefaultDenseLimit)
{
    check_dense_capacity(g.num_nodes(), limit);
    DenseMatrix<T> out(g.num_nodes(), g.num_nodes());
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        out(g.dst()[k], g.src()[k]) += static_cast<T>(g.weight(k));
    }
    return out;
}

template <typename T>
DenseMatrix<T> to_dense(const CsrMatrix<T>& a, std::size_t limit = kDefaultDenseLimit)
{
    check_dense_capacity(std::max(a.rows(), a.cols()), limit);
    DenseMatrix<T> out(a.rows(), a.cols());
    auto ptr = a.row_ptr();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
            out(i, a.col_idx()[k]) = a.values()[k];
        }
    }
    return out;
}

/// Adds a unit self-loop to every node that lacks one. Existing loops are kept
/// as they are; new loops are appended in ascending node order.
CooGraph add_self_loops(const CooGraph& g);

/// Appends one loop of the given weight to every node, regardless of existing
/// loops. Builds A + s*I in edge-list form.
CooGraph add_scaled_identity(const CooGraph& g, double scale);

/// degrees[i] = sum of weights of edges whose dst is i.
DegreeVector compute_degrees(const CooGraph& g);

/// Per-edge 1/sqrt(d[src] * d[dst]).
std::vector<double> sym_norm_coefficients(const CooGraph& g, const DegreeVector& d);

/// D^-1/2 (A + I) D^-1/2 with self-loops inserted and degrees taken on A + I.
template <typename T>
CsrMatrix<T> normalized_adjacency(const CooGraph& g)
{
    const CooGraph looped = add_self_loops(g);
    const DegreeVector d = compute_degrees(looped);
    const CsrMatrix<double> a = coo_to_csr<double>(looped);

    std::vector<T> scaled(a.nnz());
    auto ptr = a.row_ptr();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
            const std::size_t j = a.col_idx()[k];
            scaled[k] = static_cast<T>(a.values()[k] * (1.0 / std::sqrt(d[j] * d[i])));
        }
    }
    return CsrMatrix<T>(a.rows(), a.cols(),
                        std::vector<std::size_t>(ptr.begin(), ptr.end()),
                        std::vector<NodeId>(a.col_idx().begin(), a.col_idx().end()),
                        std::move(scaled));
}

/// Relabels nodes: node v becomes perm[v].
CooGraph permute_nodes(const CooGraph& g, std::span<const NodeId> perm);

} // namespace gsuite
