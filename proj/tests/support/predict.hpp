#pragma once

// Closed-form counter predictions for whole pipelines, built only from the
// graph's size and the layer widths.

#include <gsuite/graph.hpp>
#include <gsuite/instrument.hpp>
#include <gsuite/kernels.hpp>
#include <gsuite/models.hpp>

#include <map>
#include <set>
#include <vector>

namespace predict {

using gsuite::Kernel;
using gsuite::OpCounters;
namespace counters = gsuite::counters;

struct KernelTotals {
    std::uint64_t calls = 0;
    OpCounters counters;
};

inline std::uint64_t looped_edge_count(const gsuite::CooGraph& g)
{
    std::set<gsuite::NodeId> looped;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        if (g.src()[k] == g.dst()[k]) looped.insert(g.src()[k]);
    }
    return g.num_edges() + (g.num_nodes() - looped.size());
}

/// Distinct (dst, src) pairs of A plus the diagonal, i.e. nnz of a canonical A + I.
inline std::uint64_t looped_nnz(const gsuite::CooGraph& g)
{
    std::set<std::pair<gsuite::NodeId, gsuite::NodeId>> cells;
    for (std::size_t k = 0; k < g.num_edges(); ++k) cells.emplace(g.dst()[k], g.src()[k]);
    for (gsuite::NodeId v = 0; v < g.num_nodes(); ++v) cells.emplace(v, v);
    return cells.size();
}

inline std::map<Kernel, KernelTotals> pipeline(const gsuite::ModelSpec& spec,
                                               const gsuite::CooGraph& g)
{
    using gsuite::CompModel;
    using gsuite::ModelKind;
    std::map<Kernel, KernelTotals> t;
    const auto add = [&](Kernel k, const OpCounters& c) {
        ++t[k].calls;
        t[k].counters += c;
    };
    const std::uint64_t n = g.num_nodes();
    const std::uint64_t e_raw = g.num_edges();
    const std::uint64_t e_loop = looped_edge_count(g);
    const std::uint64_t nnz = looped_nnz(g);
    for (std::size_t l = 0; l + 1 < spec.dims.size(); ++l) {
        const std::uint64_t fi = spec.dims[l];
        const std::uint64_t fo = spec.dims[l + 1];
        if (spec.comp == CompModel::spmm) {
            add(Kernel::spmm, counters::spmm(n, nnz, fi));
            add(Kernel::sgemm, counters::sgemm(n, fi, fo));
            continue;
        }
        switch (spec.model) {
        case ModelKind::gcn:
            add(Kernel::sgemm, counters::sgemm(n, fi, fo));
            add(Kernel::index_select, counters::index_select(e_loop, fo));
            add(Kernel::scatter, counters::scatter(e_loop, fo, n, gsuite::ReduceOp::sum));
            break;
        case ModelKind::gin:
            add(Kernel::index_select, counters::index_select(e_raw, fi));
            add(Kernel::scatter, counters::scatter(e_raw, fi, n, gsuite::ReduceOp::sum));
            add(Kernel::sgemm, counters::sgemm(n, fi, fo));
            break;
        case ModelKind::sage:
            add(Kernel::sgemm, counters::sgemm(n, fi, fo));
            add(Kernel::index_select, counters::index_select(e_loop, fi));
            add(Kernel::scatter, counters::scatter(e_loop, fi, n, gsuite::ReduceOp::sum));
            add(Kernel::sgemm, counters::sgemm(n, fi, fo));
            break;
        }
    }
    return t;
}

} // namespace predict
