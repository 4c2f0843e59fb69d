#include <gsuite/graph.hpp>

#include <cmath>
#include <string>

namespace gsuite {

CooGraph::CooGraph(std::size_t num_nodes, std::vector<NodeId> src, std::vector<NodeId> dst,
                   std::optional<std::vector<double>> weights)
    : num_nodes_(num_nodes), src_(std::move(src)), dst_(std::move(dst)),
      weights_(std::move(weights))
{
    if (src_.size() != dst_.size()) {
        throw FormatError("coo: src has " + std::to_string(src_.size()) + " entries, dst has " +
                          std::to_string(dst_.size()));
    }
    if (weights_ && weights_->size() != src_.size()) {
        throw FormatError("coo: weights length differs from edge count");
    }
    for (std::size_t k = 0; k < src_.size(); ++k) {
        if (src_[k] >= num_nodes_ || dst_[k] >= num_nodes_) {
            throw FormatError("coo: edge " + std::to_string(k) + " (" + std::to_string(src_[k]) +
                              "," + std::to_string(dst_[k]) + ") out of range for " +
                              std::to_string(num_nodes_) + " nodes");
        }
    }
}

CooGraph add_self_loops(const CooGraph& g)
{
    const std::size_t n = g.num_nodes();
    std::vector<bool> has_loop(n, false);
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        if (g.src()[k] == g.dst()[k]) {
            has_loop[g.src()[k]] = true;
        }
    }

    std::vector<NodeId> src(g.src().begin(), g.src().end());
    std::vector<NodeId> dst(g.dst().begin(), g.dst().end());
    std::optional<std::vector<double>> w = g.weights();
    for (std::size_t v = 0; v < n; ++v) {
        if (!has_loop[v]) {
            src.push_back(static_cast<NodeId>(v));
            dst.push_back(static_cast<NodeId>(v));
            if (w) {
                w->push_back(1.0);
            }
        }
    }
    return CooGraph(n, std::move(src), std::move(dst), std::move(w));
}

CooGraph add_scaled_identity(const CooGraph& g, double scale)
{
    const std::size_t n = g.num_nodes();
    std::vector<NodeId> src(g.src().begin(), g.src().end());
    std::vector<NodeId> dst(g.dst().begin(), g.dst().end());
    std::vector<double> w;
    w.reserve(g.num_edges() + n);
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        w.push_back(g.weight(k));
    }
    for (std::size_t v = 0; v < n; ++v) {
        src.push_back(static_cast<NodeId>(v));
        dst.push_back(static_cast<NodeId>(v));
        w.push_back(scale);
    }
    return CooGraph(n, std::move(src), std::move(dst), std::move(w));
}

DegreeVector compute_degrees(const CooGraph& g)
{
    DegreeVector d{std::vector<double>(g.num_nodes(), 0.0)};
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        d.degrees[g.dst()[k]] += g.weight(k);
    }
    return d;
}

std::vector<double> sym_norm_coefficients(const CooGraph& g, const DegreeVector& d)
{
    if (d.size() != g.num_nodes()) {
        throw ShapeError("sym_norm_coefficients: degree vector has " + std::to_string(d.size()) +
                         " entries for " + std::to_string(g.num_nodes()) + " nodes");
    }
    std::vector<double> coeff(g.num_edges());
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const double du = d[g.src()[k]];
        const double dv = d[g.dst()[k]];
        if (du <= 0.0 || dv <= 0.0) {
            throw NormalizationError("edge " + std::to_string(k) +
                                     " touches a node with zero degree; insert self-loops first");
        }
        coeff[k] = 1.0 / std::sqrt(du * dv);
    }
    return coeff;
}

CooGraph permute_nodes(const CooGraph& g, std::span<const NodeId> perm)
{
    if (perm.size() != g.num_nodes()) {
        throw ShapeError("permute_nodes: permutation length differs from node count");
    }
    std::vector<NodeId> src(g.num_edges());
    std::vector<NodeId> dst(g.num_edges());
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        src[k] = perm[g.src()[k]];
        dst[k] = perm[g.dst()[k]];
    }
    return CooGraph(g.num_nodes(), std::move(src), std::move(dst), g.weights());
}

} // namespace gsuite
