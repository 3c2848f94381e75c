#pragma once

#include <cstdint>

#include "cmc/generator.hpp"

namespace test_util {

// Small deterministic generator for property-style tests.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}
    double uniform() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

inline cmc::Matrix random_matrix(Lcg& rng, int rows, int cols, double scale = 1.0) {
    cmc::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
    return m;
}

inline cmc::Matrix random_generator(Lcg& rng, int dim, double max_rate = 2.0) {
    cmc::Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = i == j ? 0.0 : max_rate * rng.uniform();
    cmc::complete_diagonal(g);
    return g;
}

}  // namespace test_util
