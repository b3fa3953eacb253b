#include "seqmeas/presets.hpp"

#include <cmath>

namespace seqmeas::presets {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Observable spin_z() { return Observable(0.5 * pauli_z()); }
Observable spin_x() { return Observable(0.5 * pauli_x()); }
Observable spin_y() { return Observable(0.5 * pauli_y()); }

PureState ket_up() { return PureState(ComplexVector::Unit(2, 0)); }
PureState ket_down() { return PureState(ComplexVector::Unit(2, 1)); }

PureState ket_plus() {
  ComplexVector v(2);
  v << M_SQRT1_2, M_SQRT1_2;
  return PureState::normalized(v);
}

PureState ket_minus() {
  ComplexVector v(2);
  v << M_SQRT1_2, -M_SQRT1_2;
  return PureState::normalized(v);
}

}  // namespace seqmeas::presets
