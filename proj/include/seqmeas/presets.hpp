#pragma once

// Spin-1/2 operators and states in the S_z eigenbasis {|up>, |down>}.

#include "seqmeas/quantum_core.hpp"

namespace seqmeas::presets {

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// S_z = sigma_z / 2
Observable spin_z();
/// S_x = sigma_x / 2
Observable spin_x();
Observable spin_y();

PureState ket_up();
PureState ket_down();
/// (|up> + |down>) / sqrt(2)
PureState ket_plus();
PureState ket_minus();

}  // namespace seqmeas::presets
