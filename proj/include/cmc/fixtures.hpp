#pragma once

#include "cmc/copulae.hpp"
#include "cmc/model.hpp"

namespace cmc::fixtures {

/// Synchronized flip chain on {0,1}^2: the pair jumps between (0,0) and
/// (1,1) with rates a and b; states (0,1) and (1,0) are absorbing. The
/// "sparse" intensity version leaves the off-diagonal states inert, so the
/// version-level strong-consistency check fails even though the chain is
/// strongly consistent under a diagonal-supported initial law.
Matrix sync_flip_sparse(double a, double b);

/// Alternative intensity version of the same chain: off-diagonal rows are
/// filled so aggregated rates no longer depend on the other coordinate. Both
/// versions induce the same law whenever the initial law charges only the
/// diagonal states.
Matrix sync_flip_filled(double a, double b);

/// Two-state absorbing generator [[-rate, rate], [0, 0]].
Matrix absorbing_two_state(double rate);

CmcModel make_model(const TimeGrid& grid, const Matrix& constant_generator,
                    const std::vector<int>& components, const Vector& initial);

/// Spec for two absorbing two-state marginals with constant rates.
MarginalSpec absorbing_pair_spec(const TimeGrid& grid, double a, double b);

}  // namespace cmc::fixtures
