#pragma once

// Dense-matrix evaluation of each layer's defining equation. Built only from
// coo_to_dense and plain triple loops, so it shares no code path with the
// kernels; the `check` command uses it as an oracle.

#include <gsuite/dense.hpp>
#include <gsuite/graph.hpp>
#include <gsuite/models.hpp>

#include <vector>

namespace gsuite::reference {

DenseMatrix<double> matmul(const DenseMatrix<double>& a, const DenseMatrix<double>& b);

/// One layer of `model`; the computational model does not matter here.
DenseMatrix<double> layer(ModelKind model, const CooGraph& g, const DenseMatrix<double>& x,
                          const LayerParams<double>& p, Activation act);

DenseMatrix<double> forward(const ModelSpec& spec, const std::vector<LayerParams<double>>& params,
                            const CooGraph& g, const DenseMatrix<double>& x);

template <typename T>
std::vector<LayerParams<double>> widen(const std::vector<LayerParams<T>>& params)
{
    std::vector<LayerParams<double>> out;
    out.reserve(params.size());
    for (const auto& p : params) {
        LayerParams<double> q;
        q.epsilon = p.epsilon;
        if (p.theta) q.theta = p.theta->template cast<double>();
        if (p.w1) q.w1 = p.w1->template cast<double>();
        if (p.w2) q.w2 = p.w2->template cast<double>();
        out.push_back(std::move(q));
    }
    return out;
}

} // namespace gsuite::reference
