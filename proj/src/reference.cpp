#include <gsuite/reference.hpp>

#include <cmath>

namespace gsuite::reference {

DenseMatrix<double> matmul(const DenseMatrix<double>& a, const DenseMatrix<double>& b)
{
    if (a.cols() != b.rows()) {
        throw ShapeError("reference matmul: " + a.shape_string() + " by " + b.shape_string());
    }
    DenseMatrix<double> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) {
                s += a(i, p) * b(p, j);
            }
            c(i, j) = s;
        }
    }
    return c;
}

namespace {

DenseMatrix<double> plus(DenseMatrix<double> a, const DenseMatrix<double>& b)
{
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            a(i, j) += b(i, j);
        }
    }
    return a;
}

DenseMatrix<double> with_self_loops(const CooGraph& g)
{
    auto a = coo_to_dense<double>(g);
    std::vector<bool> listed(g.num_nodes(), false);
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        if (g.src()[k] == g.dst()[k]) {
            listed[g.src()[k]] = true;
        }
    }
    for (std::size_t v = 0; v < a.rows(); ++v) {
        if (!listed[v]) {
            a(v, v) += 1.0;
        }
    }
    return a;
}

} // namespace

DenseMatrix<double> layer(ModelKind model, const CooGraph& g, const DenseMatrix<double>& x,
                          const LayerParams<double>& p, Activation act)
{
    const std::size_t n = g.num_nodes();
    DenseMatrix<double> out;
    switch (model) {
    case ModelKind::gcn: {
        // D^-1/2 (A + I) D^-1/2 X Theta
        auto a = with_self_loops(g);
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                d[i] += a(i, j);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = a(i, j) / std::sqrt(d[i] * d[j]);
            }
        }
        out = matmul(matmul(a, x), *p.theta);
        break;
    }
    case ModelKind::gin: {
        // (A + (1 + eps) I) X Theta
        auto a = coo_to_dense<double>(g);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) += 1.0 + p.epsilon;
        }
        out = matmul(matmul(a, x), *p.theta);
        break;
    }
    case ModelKind::sage: {
        // X W1 + (row-normalized (A + I)) X W2
        auto a = with_self_loops(g);
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                d += a(i, j);
            }
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) /= d;
            }
        }
        out = plus(matmul(x, *p.w1), matmul(matmul(a, x), *p.w2));
        break;
    }
    }
    apply_activation(act, out);
    return out;
}

DenseMatrix<double> forward(const ModelSpec& spec, const std::vector<LayerParams<double>>& params,
                            const CooGraph& g, const DenseMatrix<double>& x)
{
    DenseMatrix<double> h = x;
    for (const auto& p : params) {
        h = layer(spec.model, g, h, p, spec.activation);
    }
    return h;
}

} // namespace gsuite::reference
