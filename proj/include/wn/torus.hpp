#pragma once

#include "wn/circle_witten.hpp"

namespace wn {

// Kunneth product of two exact circle complexes. Degree 1 is ordered as
// (A1 x B0, A0 x B1); d_0 = [dA x 1; 1 x dB], d_1 = [-(1 x dB), dA x 1].
GradedMatrixComplex torus_tensor(const CircleWittenSystem& a, const CircleWittenSystem& b,
                                 SpectralParameter z);

// The same block pattern with eta_A, eta_B multiplication in place of d.
std::vector<CMatrix> torus_eta_wedge(const CircleWittenSystem& a, const CircleWittenSystem& b);

// sum_k (-1)^{k+1} sum_j <u_j, E_k v_j> / sigma_j over nonzero singular triples
// of d_k: the t -> 0 limit of Tr^s(eta d^{-1} e^{-t Delta} Pi^1).
cplx graded_zeta_one(const GradedMatrixComplex& complex, const std::vector<CMatrix>& eta_wedge);

}  // namespace wn
