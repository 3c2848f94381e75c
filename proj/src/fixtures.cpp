#include "cmc/fixtures.hpp"

namespace cmc::fixtures {

Matrix sync_flip_sparse(double a, double b) {
    Matrix L(4, 4);
    L << -a, 0, 0, a,
        0, 0, 0, 0,
        0, 0, 0, 0,
        b, 0, 0, -b;
    return L;
}

Matrix sync_flip_filled(double a, double b) {
    Matrix L(4, 4);
    L << -a, 0, 0, a,
        b, -a - b, 0, a,
        b, 0, -a - b, a,
        b, 0, 0, -b;
    return L;
}

Matrix absorbing_two_state(double rate) {
    Matrix L(2, 2);
    L << -rate, rate, 0, 0;
    return L;
}

CmcModel make_model(const TimeGrid& grid, const Matrix& constant_generator,
                    const std::vector<int>& components, const Vector& initial) {
    return CmcModel(ProductStateSpace(components),
                    GeneratorPath::constant(grid, constant_generator),
                    InitialLaw(initial));
}

MarginalSpec absorbing_pair_spec(const TimeGrid& grid, double a, double b) {
    MarginalSpec spec{grid, {ComponentTarget{}, ComponentTarget{}}};
    spec.components[0].cells.assign(grid.num_cells(), absorbing_two_state(a));
    spec.components[1].cells.assign(grid.num_cells(), absorbing_two_state(b));
    spec.components[0].initial = Vector::Zero(2);
    spec.components[0].initial[0] = 1.0;
    spec.components[1].initial = spec.components[0].initial;
    return spec;
}

}  // namespace cmc::fixtures
