#pragma once

#include "mqnmr/basis.hpp"
#include "mqnmr/geometry.hpp"

namespace mqnmr {

// Secular dipolar Hamiltonian (rotating frame, like spins):
//   H_dd = sum_{j<k} D_jk [ Iz_j Iz_k - (1/4)(I+_j I-_k + I-_j I+_k) ]
// Hermitian, commutes with collective I_z, block-diagonal in m_z.
CMatrix dipolar_secular(const SpinSystem& system);

// Double-quantum average Hamiltonian of the multipulse preparation period:
//   H_av = -(1/2) sum_{j<k} D_jk ( I+_j I+_k + I-_j I-_k )
// Hermitian with zero diagonal; every nonzero element connects basis states
// whose m_z differs by exactly +-2.
CMatrix dq_average(const SpinSystem& system);

} // namespace mqnmr
