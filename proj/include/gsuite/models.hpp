#pragma once

// GCN, GIN and GraphSAGE layers under the message-passing (MP) and
// sparse-matrix (SpMM) computational models, plus multi-layer forward passes.
//
//   GCN  MP    act( scatter_sum( c_uv * index_select(X Theta, src), dst ) )  over A + I
//   GCN  SpMM  act( (D^-1/2 (A + I) D^-1/2 X) Theta )
//   GIN  MP    act( ((1 + eps) X + scatter_sum(index_select(X, src), dst)) Theta )
//   GIN  SpMM  act( ((A + (1 + eps) I) X) Theta )
//   SAGE MP    act( X W1 + mean_{N(v) + v}(X) W2 )
//
// with c_uv = 1 / sqrt(d_u d_v). SAGE has no SpMM form.

#include <gsuite/dense.hpp>
#include <gsuite/error.hpp>
#include <gsuite/graph.hpp>
#include <gsuite/instrument.hpp>
#include <gsuite/kernels.hpp>
#include <gsuite/rng.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gsuite {

enum class ModelKind { gcn, gin, sage };
enum class CompModel { mp, spmm };
enum class Activation { relu, sigmoid, identity };
enum class Precision { f32, f64 };

std::string_view to_string(ModelKind m) noexcept;
std::string_view to_string(CompModel c) noexcept;
std::string_view to_string(Activation a) noexcept;
std::string_view to_string(Precision p) noexcept;

// Parsers accept the lowercase names above and throw UsageError otherwise.
ModelKind parse_model(std::string_view s);
CompModel parse_comp_model(std::string_view s);
Activation parse_activation(std::string_view s);
Precision parse_precision(std::string_view s);

struct ModelSpec {
    ModelKind model = ModelKind::gcn;
    CompModel comp = CompModel::mp;
    std::size_t num_layers = 2;
    std::vector<std::size_t> dims; ///< num_layers + 1 feature widths
    Activation activation = Activation::relu;
    double epsilon = 0.0;
    std::uint64_t seed = 0;

    /// Throws UsageError for SAGE + SpMM, ShapeError for a bad width chain.
    void validate() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Weights of one layer. GCN/GIN carry theta; SAGE carries w1 (self) and
/// w2 (neighbors). All are [f_in x f_out].
template <typename T>
struct LayerParams {
    std::optional<DenseMatrix<T>> theta;
    std::optional<DenseMatrix<T>> w1;
    std::optional<DenseMatrix<T>> w2;
    double epsilon = 0.0;

    friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

namespace detail {

template <typename T>
DenseMatrix<T> uniform_weights(std::uint64_t seed, std::size_t layer, std::string_view role,
                               std::size_t f_in, std::size_t f_out)
{
    const double bound = 1.0 / std::sqrt(static_cast<double>(f_in));
    SplitMix64 rng(derive_seed(seed, role, layer));
    DenseMatrix<T> w(f_in, f_out);
    for (T& v : w.data()) {
        v = static_cast<T>(rng.next_uniform(-bound, bound));
    }
    return w;
}

} // namespace detail

/// Deterministic weights in [-1/sqrt(f_in), 1/sqrt(f_in)], one SplitMix64
/// stream per (seed, layer, role).
template <typename T>
std::vector<LayerParams<T>> init_weights(const ModelSpec& spec)
{
    spec.validate();
    std::vector<LayerParams<T>> layers(spec.num_layers);
    for (std::size_t l = 0; l < spec.num_layers; ++l) {
        const std::size_t f_in = spec.dims[l];
        const std::size_t f_out = spec.dims[l + 1];
        auto& p = layers[l];
        p.epsilon = spec.epsilon;
        if (spec.model == ModelKind::sage) {
            p.w1 = detail::uniform_weights<T>(spec.seed, l, "w1", f_in, f_out);
            p.w2 = detail::uniform_weights<T>(spec.seed, l, "w2", f_in, f_out);
        } else {
            p.theta = detail::uniform_weights<T>(spec.seed, l, "theta", f_in, f_out);
        }
    }
    return layers;
}

// ---------------------------------------------------------------------------
// Activations

template <typename T>
void apply_activation(Activation act, DenseMatrix<T>& x)
{
    switch (act) {
    case Activation::relu:
        for (T& v : x.data()) {
            v = v > T(0) ? v : T(0);
        }
        break;
    case Activation::sigmoid:
        for (T& v : x.data()) {
            v = T(1) / (T(1) + std::exp(-v));
        }
        break;
    case Activation::identity:
        break;
    }
}

template <typename T>
DenseMatrix<T> relu(DenseMatrix<T> x)
{
    apply_activation(Activation::relu, x);
    return x;
}

template <typename T>
DenseMatrix<T> sigmoid(DenseMatrix<T> x)
{
    apply_activation(Activation::sigmoid, x);
    return x;
}

// ---------------------------------------------------------------------------
// Per-graph structures, built once per pipeline and shared by all layers.

template <typename T>
struct GraphOperators {
    ModelKind model = ModelKind::gcn;
    CompModel comp = CompModel::mp;
    std::size_t num_nodes = 0;
    double epsilon = 0.0;

    /// Edge list traversed by MP layers: A + I for GCN and SAGE, A for GIN.
    CooGraph edges;
    /// Per-edge message scale for MP layers; empty means all ones.
    std::vector<T> edge_scale;
    /// SAGE: weighted in-degree of A + I (the mean's divisor).
    std::vector<T> degree;
    /// SpMM propagation matrix: normalized A + I for GCN, A + (1 + eps) I for GIN.
    CsrMatrix<T> propagation;
};

template <typename T>
GraphOperators<T> prepare_graph(const CooGraph& g, ModelKind model, CompModel comp,
                                double epsilon)
{
    if (model == ModelKind::sage && comp == CompModel::spmm) {
        throw UsageError("GraphSAGE is only available under the mp computational model");
    }
    GraphOperators<T> ops;
    ops.model = model;
    ops.comp = comp;
    ops.num_nodes = g.num_nodes();
    ops.epsilon = epsilon;

    if (comp == CompModel::spmm) {
        ops.propagation = model == ModelKind::gcn
                              ? normalized_adjacency<T>(g)
                              : coo_to_csr<T>(add_scaled_identity(g, 1.0 + epsilon));
        return ops;
    }

    switch (model) {
    case ModelKind::gcn: {
        ops.edges = add_self_loops(g);
        const auto coeff = sym_norm_coefficients(ops.edges, compute_degrees(ops.edges));
        ops.edge_scale.resize(coeff.size());
        for (std::size_t k = 0; k < coeff.size(); ++k) {
            ops.edge_scale[k] = static_cast<T>(ops.edges.weight(k) * coeff[k]);
        }
        break;
    }
    case ModelKind::gin:
        ops.edges = g;
        if (g.has_weights()) {
            ops.edge_scale.assign(g.weights()->begin(), g.weights()->end());
        }
        break;
    case ModelKind::sage: {
        ops.edges = add_self_loops(g);
        if (ops.edges.has_weights()) {
            ops.edge_scale.assign(ops.edges.weights()->begin(), ops.edges.weights()->end());
        }
        const auto d = compute_degrees(ops.edges);
        ops.degree.assign(d.degrees.begin(), d.degrees.end());
        break;
    }
    }
    return ops;
}

namespace detail {

template <typename T>
void check_layer_input(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                       const std::optional<DenseMatrix<T>>& w, std::string_view layer,
                       std::string_view role)
{
    if (x.rows() != ops.num_nodes) {
        throw ShapeError(std::string(layer) + ": features " + x.shape_string() + " for " +
                         std::to_string(ops.num_nodes) + " nodes");
    }
    if (!w) {
        throw ShapeError(std::string(layer) + ": missing " + std::string(role) + " weights");
    }
    if (w->rows() != x.cols()) {
        throw ShapeError(std::string(layer) + ": " + std::string(role) + " " + w->shape_string() +
                         " does not accept features " + x.shape_string());
    }
}

template <typename T>
void check_operators(const GraphOperators<T>& ops, ModelKind model, CompModel comp,
                     std::string_view layer)
{
    if (ops.model != model || ops.comp != comp) {
        throw ShapeError(std::string(layer) + ": graph operators were prepared for " +
                         std::string(to_string(ops.model)) + "/" +
                         std::string(to_string(ops.comp)));
    }
}

template <typename T>
void scale_rows(DenseMatrix<T>& m, const std::vector<T>& scale)
{
    if (scale.empty()) {
        return;
    }
    for (std::size_t k = 0; k < m.rows(); ++k) {
        for (T& v : m.row(k)) {
            v *= scale[k];
        }
    }
}

template <typename T>
DenseMatrix<T> traced_sgemm(KernelObserver* obs, const DenseMatrix<T>& a, const DenseMatrix<T>& b)
{
    return invoke_kernel(obs, Kernel::sgemm, [&](OpCounters* c) { return sgemm(a, b, c); });
}

template <typename T>
DenseMatrix<T> traced_gather_sum(KernelObserver* obs, const GraphOperators<T>& ops,
                                 const DenseMatrix<T>& x)
{
    auto messages = invoke_kernel(obs, Kernel::index_select, [&](OpCounters* c) {
        return index_select(x, ops.edges.src(), c);
    });
    scale_rows(messages, ops.edge_scale);
    return invoke_kernel(obs, Kernel::scatter, [&](OpCounters* c) {
        return scatter(messages, ops.edges.dst(), ops.num_nodes, ReduceOp::sum, c);
    });
}

} // namespace detail

// ---------------------------------------------------------------------------
// Layers on prepared operators. The observer, when given, receives every
// core-kernel invocation.

template <typename T>
DenseMatrix<T> gcn_layer_mp(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                            const LayerParams<T>& p, Activation act,
                            KernelObserver* obs = nullptr)
{
    detail::check_operators(ops, ModelKind::gcn, CompModel::mp, "gcn_layer_mp");
    detail::check_layer_input(ops, x, p.theta, "gcn_layer_mp", "theta");
    const auto linear = detail::traced_sgemm(obs, x, *p.theta);
    auto out = detail::traced_gather_sum(obs, ops, linear);
    apply_activation(act, out);
    return out;
}

template <typename T>
DenseMatrix<T> gcn_layer_spmm(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                              const LayerParams<T>& p, Activation act,
                              KernelObserver* obs = nullptr)
{
    detail::check_operators(ops, ModelKind::gcn, CompModel::spmm, "gcn_layer_spmm");
    detail::check_layer_input(ops, x, p.theta, "gcn_layer_spmm", "theta");
    const auto propagated = invoke_kernel(
        obs, Kernel::spmm, [&](OpCounters* c) { return spmm(ops.propagation, x, c); });
    auto out = detail::traced_sgemm(obs, propagated, *p.theta);
    apply_activation(act, out);
    return out;
}

template <typename T>
DenseMatrix<T> gin_layer_mp(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                            const LayerParams<T>& p, Activation act,
                            KernelObserver* obs = nullptr)
{
    detail::check_operators(ops, ModelKind::gin, CompModel::mp, "gin_layer_mp");
    detail::check_layer_input(ops, x, p.theta, "gin_layer_mp", "theta");
    auto combined = detail::traced_gather_sum(obs, ops, x);
    const T self_scale = static_cast<T>(1.0 + p.epsilon);
    auto xs = x.data();
    auto cs = combined.data();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        cs[i] = self_scale * xs[i] + cs[i];
    }
    auto out = detail::traced_sgemm(obs, combined, *p.theta);
    apply_activation(act, out);
    return out;
}

template <typename T>
DenseMatrix<T> gin_layer_spmm(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                              const LayerParams<T>& p, Activation act,
                              KernelObserver* obs = nullptr)
{
    detail::check_operators(ops, ModelKind::gin, CompModel::spmm, "gin_layer_spmm");
    detail::check_layer_input(ops, x, p.theta, "gin_layer_spmm", "theta");
    if (p.epsilon != ops.epsilon) {
        throw ShapeError("gin_layer_spmm: layer epsilon differs from the prepared A + (1+eps)I");
    }
    const auto propagated = invoke_kernel(
        obs, Kernel::spmm, [&](OpCounters* c) { return spmm(ops.propagation, x, c); });
    auto out = detail::traced_sgemm(obs, propagated, *p.theta);
    apply_activation(act, out);
    return out;
}

template <typename T>
DenseMatrix<T> sage_layer_mp(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                             const LayerParams<T>& p, Activation act,
                             KernelObserver* obs = nullptr)
{
    detail::check_operators(ops, ModelKind::sage, CompModel::mp, "sage_layer_mp");
    detail::check_layer_input(ops, x, p.w1, "sage_layer_mp", "w1");
    detail::check_layer_input(ops, x, p.w2, "sage_layer_mp", "w2");

    auto out = detail::traced_sgemm(obs, x, *p.w1);
    // Mean over N(v) + {v}: a sum scatter followed by division by the
    // receiver's (weighted) degree.
    auto mean = detail::traced_gather_sum(obs, ops, x);
    for (std::size_t i = 0; i < mean.rows(); ++i) {
        for (T& v : mean.row(i)) {
            v /= ops.degree[i];
        }
    }
    const auto neighbors = detail::traced_sgemm(obs, mean, *p.w2);
    auto os = out.data();
    auto ns = neighbors.data();
    for (std::size_t i = 0; i < os.size(); ++i) {
        os[i] += ns[i];
    }
    apply_activation(act, out);
    return out;
}

// Single-layer conveniences that build the graph operators on the spot.

template <typename T>
DenseMatrix<T> gcn_layer_mp(const CooGraph& g, const DenseMatrix<T>& x, const LayerParams<T>& p,
                            Activation act)
{
    return gcn_layer_mp(prepare_graph<T>(g, ModelKind::gcn, CompModel::mp, p.epsilon), x, p, act);
}

template <typename T>
DenseMatrix<T> gcn_layer_spmm(const CooGraph& g, const DenseMatrix<T>& x,
                              const LayerParams<T>& p, Activation act)
{
    return gcn_layer_spmm(prepare_graph<T>(g, ModelKind::gcn, CompModel::spmm, p.epsilon), x, p,
                          act);
}

template <typename T>
DenseMatrix<T> gin_layer_mp(const CooGraph& g, const DenseMatrix<T>& x, const LayerParams<T>& p,
                            Activation act)
{
    return gin_layer_mp(prepare_graph<T>(g, ModelKind::gin, CompModel::mp, p.epsilon), x, p, act);
}

template <typename T>
DenseMatrix<T> gin_layer_spmm(const CooGraph& g, const DenseMatrix<T>& x,
                              const LayerParams<T>& p, Activation act)
{
    return gin_layer_spmm(prepare_graph<T>(g, ModelKind::gin, CompModel::spmm, p.epsilon), x, p,
                          act);
}

template <typename T>
DenseMatrix<T> sage_layer_mp(const CooGraph& g, const DenseMatrix<T>& x, const LayerParams<T>& p,
                             Activation act)
{
    return sage_layer_mp(prepare_graph<T>(g, ModelKind::sage, CompModel::mp, p.epsilon), x, p,
                         act);
}

/// Dispatches to the layer selected by (ops.model, ops.comp).
template <typename T>
DenseMatrix<T> apply_layer(const GraphOperators<T>& ops, const DenseMatrix<T>& x,
                           const LayerParams<T>& p, Activation act, KernelObserver* obs = nullptr)
{
    switch (ops.model) {
    case ModelKind::gcn:
        return ops.comp == CompModel::mp ? gcn_layer_mp(ops, x, p, act, obs)
                                         : gcn_layer_spmm(ops, x, p, act, obs);
    case ModelKind::gin:
        return ops.comp == CompModel::mp ? gin_layer_mp(ops, x, p, act, obs)
                                         : gin_layer_spmm(ops, x, p, act, obs);
    case ModelKind::sage:
        return sage_layer_mp(ops, x, p, act, obs);
    }
    throw ShapeError("apply_layer: unknown model");
}

/// Checks that params match spec's width chain and x feeds the first layer.
template <typename T>
void check_pipeline_shapes(const ModelSpec& spec, const std::vector<LayerParams<T>>& params,
                           const CooGraph& g, const DenseMatrix<T>& x)
{
    spec.validate();
    if (params.size() != spec.num_layers) {
        throw ShapeError("forward: " + std::to_string(params.size()) + " parameter sets for " +
                         std::to_string(spec.num_layers) + " layers");
    }
    if (x.rows() != g.num_nodes() || x.cols() != spec.dims[0]) {
        throw ShapeError("forward: features " + x.shape_string() + " do not match " +
                         std::to_string(g.num_nodes()) + " nodes of width " +
                         std::to_string(spec.dims[0]));
    }
    for (std::size_t l = 0; l < params.size(); ++l) {
        const auto& p = params[l];
        const bool sage = spec.model == ModelKind::sage;
        const auto& first = sage ? p.w1 : p.theta;
        if (!first || (sage && !p.w2)) {
            throw ShapeError("forward: layer " + std::to_string(l) + " lacks weights for " +
                             std::string(to_string(spec.model)));
        }
        for (const auto* w : {&first, sage ? &p.w2 : &first}) {
            if ((*w)->rows() != spec.dims[l] || (*w)->cols() != spec.dims[l + 1]) {
                throw ShapeError("forward: layer " + std::to_string(l) + " weights " +
                                 (*w)->shape_string() + " break the width chain");
            }
        }
    }
}

/// Multi-layer forward pass; graph structures are built once and reused by
/// every layer. The activation follows every layer, including the last.
template <typename T>
DenseMatrix<T> forward(const ModelSpec& spec, const std::vector<LayerParams<T>>& params,
                       const CooGraph& g, const DenseMatrix<T>& x, KernelObserver* obs = nullptr)
{
    check_pipeline_shapes(spec, params, g, x);
    const auto ops = prepare_graph<T>(g, spec.model, spec.comp, spec.epsilon);
    DenseMatrix<T> h = x;
    for (const auto& p : params) {
        h = apply_layer(ops, h, p, spec.activation, obs);
    }
    return h;
}

} // namespace gsuite
