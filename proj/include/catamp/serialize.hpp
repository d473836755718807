#pragma once

// Plain-text dump of states for debugging. Layout:
//
//   catamp-state 1 pure|mixed
//   dims d_1 ... d_M
//   deficit <value>
//   <i_1 ... i_M re im>                      (pure, one line per nonzero amplitude)
//   <i_1 ... i_M ; j_1 ... j_M re im>        (mixed, row index ; column index)
//
// Numbers are written with 17 significant digits so a round trip is exact.

#include <iosfwd>

#include "catamp/fock_state.hpp"

namespace catamp {

void write_state(std::ostream& os, const FockState& psi);
void write_state(std::ostream& os, const DensityOperator& rho);

FockState read_pure_state(std::istream& is);
DensityOperator read_mixed_state(std::istream& is);

}  // namespace catamp
