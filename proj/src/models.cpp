#include <gsuite/models.hpp>

#include <string>

namespace gsuite {

std::string_view to_string(ModelKind m) noexcept
{
    switch (m) {
    case ModelKind::gcn: return "gcn";
    case ModelKind::gin: return "gin";
    case ModelKind::sage: return "sage";
    }
    return "gcn";
}

std::string_view to_string(CompModel c) noexcept
{
    return c == CompModel::mp ? "mp" : "spmm";
}

std::string_view to_string(Activation a) noexcept
{
    switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
    }
    return "relu";
}

std::string_view to_string(Precision p) noexcept
{
    return p == Precision::f32 ? "f32" : "f64";
}

namespace {

[[noreturn]] void bad_choice(std::string_view what, std::string_view got, std::string_view allowed)
{
    throw UsageError("invalid " + std::string(what) + " '" + std::string(got) + "' (expected " +
                     std::string(allowed) + ")");
}

} // namespace

ModelKind parse_model(std::string_view s)
{
    if (s == "gcn") return ModelKind::gcn;
    if (s == "gin") return ModelKind::gin;
    if (s == "sage") return ModelKind::sage;
    bad_choice("model", s, "gcn|gin|sage");
}

CompModel parse_comp_model(std::string_view s)
{
    if (s == "mp") return CompModel::mp;
    if (s == "spmm") return CompModel::spmm;
    bad_choice("computational model", s, "mp|spmm");
}

Activation parse_activation(std::string_view s)
{
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "identity") return Activation::identity;
    bad_choice("activation", s, "relu|sigmoid|identity");
}

Precision parse_precision(std::string_view s)
{
    if (s == "f32") return Precision::f32;
    if (s == "f64") return Precision::f64;
    bad_choice("precision", s, "f32|f64");
}

void ModelSpec::validate() const
{
    if (model == ModelKind::sage && comp == CompModel::spmm) {
        throw UsageError("sage cannot run with --comp spmm: GraphSAGE is only available under "
                         "the mp computational model");
    }
    if (num_layers < 1) {
        throw ShapeError("model needs at least one layer");
    }
    if (dims.size() != num_layers + 1) {
        throw ShapeError("width chain has " + std::to_string(dims.size()) + " entries for " +
                         std::to_string(num_layers) + " layers (expected layers + 1)");
    }
    for (std::size_t d : dims) {
        if (d == 0) {
            throw ShapeError("feature widths must be positive");
        }
    }
}

} // namespace gsuite
