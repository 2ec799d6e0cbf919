#include "wn/torus.hpp"

#include "wn/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace wn {

namespace {

struct Blocks {
    CMatrix d0, d1;
};

Blocks tensor_blocks(const CMatrix& fa, const CMatrix& fb) {
    const Eigen::Index na = fa.rows(), nb = fb.rows();
    const CMatrix ia = CMatrix::Identity(na, na), ib = CMatrix::Identity(nb, nb);
    CMatrix a1 = Eigen::kroneckerProduct(fa, ib);
    CMatrix b1 = Eigen::kroneckerProduct(ia, fb);
    const Eigen::Index n = na * nb;
    Blocks out;
    out.d0.resize(2 * n, n);
    out.d0.topRows(n) = a1;
    out.d0.bottomRows(n) = b1;
    out.d1.resize(n, 2 * n);
    out.d1.leftCols(n) = -b1;
    out.d1.rightCols(n) = a1;
    return out;
}

void require_exact(const CircleWittenSystem& s) {
    if (!s.exact()) throw UnsupportedError("torus_tensor needs exact factors (c = 0)");
}

}  // namespace

GradedMatrixComplex torus_tensor(const CircleWittenSystem& a, const CircleWittenSystem& b,
                                 SpectralParameter z) {
    require_exact(a);
    require_exact(b);
    Blocks bl = tensor_blocks(assemble_circle_complex(a, z).d[0], assemble_circle_complex(b, z).d[0]);
    GradedMatrixComplex cx;
    const int n = a.N * b.N;
    cx.dims = {n, 2 * n, n};
    cx.d = {std::move(bl.d0), std::move(bl.d1)};
    cx.label = "torus";
    cx.source = "torus " + std::to_string(a.N) + "x" + std::to_string(b.N);
    return cx;
}

std::vector<CMatrix> torus_eta_wedge(const CircleWittenSystem& a, const CircleWittenSystem& b) {
    CMatrix ea = CMatrix::Zero(a.N, a.N), eb = CMatrix::Zero(b.N, b.N);
    for (int i = 0; i < a.N; ++i) ea(i, i) = a.eta[static_cast<std::size_t>(i)];
    for (int i = 0; i < b.N; ++i) eb(i, i) = b.eta[static_cast<std::size_t>(i)];
    Blocks bl = tensor_blocks(ea, eb);
    return {std::move(bl.d0), std::move(bl.d1)};
}

cplx graded_zeta_one(const GradedMatrixComplex& cx, const std::vector<CMatrix>& e) {
    cx.check_shapes();
    if (e.size() != cx.d.size()) throw ShapeError("graded_zeta_one: one eta-wedge per differential");
    cplx total = 0.0;
    for (std::size_t k = 0; k < cx.d.size(); ++k) {
        if (e[k].rows() != cx.d[k].rows() || e[k].cols() != cx.d[k].cols())
            throw ShapeError("graded_zeta_one: eta-wedge shape differs from d");
        SingularTriples tr = singular_triples(cx.d[k]);
        CMatrix ev = e[k] * tr.V.leftCols(tr.rank);
        cplx part = 0.0;
        for (Eigen::Index j = 0; j < tr.rank; ++j) part += tr.U.col(j).dot(ev.col(j)) / tr.sigma[j];
        total += (k % 2 ? 1.0 : -1.0) * part;
    }
    return total;
}

}  // namespace wn
