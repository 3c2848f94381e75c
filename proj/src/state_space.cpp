#include "cmc/state_space.hpp"

#include <limits>
#include <string>

#include "cmc/errors.hpp"

namespace cmc {

ProductStateSpace::ProductStateSpace(std::vector<int> component_sizes)
    : sizes_(std::move(component_sizes)) {
    if (sizes_.empty())
        throw Error("state space needs at least one component");
    long long d = 1;
    for (int s : sizes_) {
        if (s < 1)
            throw Error("component cardinality must be >= 1");
        d *= s;
        if (d > std::numeric_limits<int>::max())
            throw Error("product state space too large");
    }
    dim_ = static_cast<int>(d);
    // stride of component k = product of sizes of the faster-varying ones
    strides_.assign(sizes_.size(), 1);
    for (int k = static_cast<int>(sizes_.size()) - 2; k >= 0; --k)
        strides_[k] = strides_[k + 1] * sizes_[k + 1];
}

int ProductStateSpace::component_size(int k) const {
    if (k < 0 || k >= num_components())
        throw OutOfRange("component index " + std::to_string(k));
    return sizes_[k];
}

int ProductStateSpace::flat_index(const std::vector<int>& multi) const {
    if (static_cast<int>(multi.size()) != num_components())
        throw DimensionMismatch("multi-index has wrong arity");
    int flat = 0;
    for (int k = 0; k < num_components(); ++k) {
        if (multi[k] < 0 || multi[k] >= sizes_[k])
            throw OutOfRange("coordinate " + std::to_string(k) + " out of range");
        flat += multi[k] * strides_[k];
    }
    return flat;
}

std::vector<int> ProductStateSpace::multi_index(int flat) const {
    if (flat < 0 || flat >= dim_)
        throw OutOfRange("flat index " + std::to_string(flat));
    std::vector<int> multi(sizes_.size());
    for (int k = 0; k < num_components(); ++k) {
        multi[k] = flat / strides_[k];
        flat -= multi[k] * strides_[k];
    }
    return multi;
}

int ProductStateSpace::coordinate(int flat, int k) const {
    if (flat < 0 || flat >= dim_)
        throw OutOfRange("flat index " + std::to_string(flat));
    if (k < 0 || k >= num_components())
        throw OutOfRange("component index " + std::to_string(k));
    return (flat / strides_[k]) % sizes_[k];
}

std::vector<int> ProductStateSpace::slice(int k, int value) const {
    if (value < 0 || value >= component_size(k))
        throw OutOfRange("component state out of range");
    std::vector<int> out;
    out.reserve(dim_ / sizes_[k]);
    for (int x = 0; x < dim_; ++x)
        if (coordinate(x, k) == value)
            out.push_back(x);
    return out;
}

}  // namespace cmc
