#pragma once

#include <cstddef>
#include <vector>

namespace cmc {

/// Cartesian product S = S_1 x ... x S_N of component spaces. Component
/// states are labelled 0..|S_k|-1. The flat index is row-major over
/// (x^1, ..., x^N) with x^N varying fastest, which is exactly the ordering
/// induced by iterated Kronecker products.
class ProductStateSpace {
public:
    explicit ProductStateSpace(std::vector<int> component_sizes);

    int num_components() const { return static_cast<int>(sizes_.size()); }
    int component_size(int k) const;
    int dim() const { return dim_; }

    int flat_index(const std::vector<int>& multi) const;
    std::vector<int> multi_index(int flat) const;

    /// Coordinate k of the state with the given flat index.
    int coordinate(int flat, int k) const;

    /// All flat indices whose k-th coordinate equals value.
    std::vector<int> slice(int k, int value) const;

    bool operator==(const ProductStateSpace& o) const { return sizes_ == o.sizes_; }

private:
    std::vector<int> sizes_;
    std::vector<int> strides_;
    int dim_;
};

}  // namespace cmc
