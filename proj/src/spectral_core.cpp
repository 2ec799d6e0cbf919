#include "wn/spectral_core.hpp"

#include "wn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wn {

SpectralParameter::SpectralParameter(double mu_, double nu_) : mu(mu_), nu(nu_) {
    if (!std::isfinite(mu) || !std::isfinite(nu))
        throw DomainError("SpectralParameter: mu and nu must be finite");
}

void GradedMatrixComplex::check_shapes() const {
    if (dims.empty()) throw ShapeError("complex has no degrees");
    if (d.size() + 1 != dims.size())
        throw ShapeError("complex with " + std::to_string(dims.size()) + " degrees needs " +
                         std::to_string(dims.size() - 1) + " differentials");
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k].rows() != dims[k + 1] || d[k].cols() != dims[k])
            throw ShapeError("d_" + std::to_string(k) + " has shape " +
                             std::to_string(d[k].rows()) + "x" + std::to_string(d[k].cols()) +
                             ", expected " + std::to_string(dims[k + 1]) + "x" +
                             std::to_string(dims[k]));
    }
}

double GradedMatrixComplex::d2_residual() const {
    double r = 0.0;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) r = std::max(r, (d[k + 1] * d[k]).norm());
    return r;
}

double GradedMatrixComplex::max_norm() const {
    double r = 0.0;
    for (const auto& m : d) r = std::max(r, m.norm());
    return r;
}

std::vector<int> GradedLaplacianFamily::betti() const {
    if (!has_spectra()) throw StateError("betti: spectra not computed");
    std::vector<int> b;
    for (const auto& s : spectra) {
        int n = 0;
        for (Eigen::Index j = 0; j < s.values.size(); ++j) {
            bool ker = s.tags.empty() ? s.values[j] <= s.kernel_tol : s.tags[j] == PairTag::Kernel;
            n += ker ? 1 : 0;
        }
        b.push_back(n);
    }
    return b;
}

GradedLaplacianFamily assemble_laplacians(const GradedMatrixComplex& complex,
                                          const AssembleOptions& opt) {
    complex.check_shapes();
    GradedLaplacianFamily fam;
    fam.complex = complex;
    fam.d2_residual = complex.d2_residual();
    if (opt.exact_source) {
        if (fam.d2_residual != 0.0)
            throw NotAComplex("d^2 is not exactly zero (residual " +
                              std::to_string(fam.d2_residual) + ")");
    } else {
        double nrm = complex.max_norm();
        if (fam.d2_residual > opt.tol_complex_rel * std::max(1.0, nrm * nrm))
            throw NotAComplex("d^2 residual " + std::to_string(fam.d2_residual) +
                              " above tolerance");
    }
    const int nd = static_cast<int>(complex.dims.size());
    for (int k = 0; k < nd; ++k) {
        CMatrix lap = CMatrix::Zero(complex.dims[k], complex.dims[k]);
        if (k < nd - 1) lap += complex.d[k].adjoint() * complex.d[k];
        if (k > 0) lap += complex.d[k - 1] * complex.d[k - 1].adjoint();
        fam.laplacians.push_back(std::move(lap));
    }
    for (int k = 0; k + 1 < nd; ++k) {
        double r = (complex.d[k] * fam.laplacians[k] - fam.laplacians[k + 1] * complex.d[k]).norm();
        fam.commutation_residual = std::max(fam.commutation_residual, r);
    }
    return fam;
}

double rank_tolerance(const RVector& s, Eigen::Index rows, Eigen::Index cols) {
    if (s.size() == 0) return 0.0;
    return 10.0 * static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon() * s.maxCoeff();
}

double hermitian_kernel_tolerance(const RVector& ev) {
    double lmax = ev.size() ? std::max(0.0, ev.maxCoeff()) : 0.0;
    return 1e-9 * (1.0 + lmax);
}

SingularTriples singular_triples(const CMatrix& a) {
    SingularTriples t;
    if (a.rows() == 0 || a.cols() == 0) {
        t.U = CMatrix(a.rows(), 0);
        t.V = CMatrix(a.cols(), 0);
        return t;
    }
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    t.sigma = svd.singularValues();
    t.U = svd.matrixU();
    t.V = svd.matrixV();
    double tol = rank_tolerance(t.sigma, a.rows(), a.cols());
    t.rank = 0;
    while (t.rank < t.sigma.size() && t.sigma[t.rank] > tol) ++t.rank;
    return t;
}

namespace {

DegreeSpectrum sort_spectrum(std::vector<double> vals, CMatrix vecs, std::vector<PairTag> tags) {
    std::vector<int> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    DegreeSpectrum s;
    s.values.resize(static_cast<Eigen::Index>(vals.size()));
    s.vectors.resize(vecs.rows(), vecs.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
        s.values[static_cast<Eigen::Index>(i)] = vals[order[i]];
        s.vectors.col(static_cast<Eigen::Index>(i)) = vecs.col(order[i]);
        s.tags.push_back(tags[order[i]]);
    }
    return s;
}

void singular_route(GradedLaplacianFamily& fam) {
    const auto& cx = fam.complex;
    const int nd = static_cast<int>(cx.dims.size());
    std::vector<SingularTriples> tr;
    for (int k = 0; k + 1 < nd; ++k) tr.push_back(singular_triples(cx.d[k]));
    for (int k = 0; k < nd; ++k) {
        const Eigen::Index n = cx.dims[k];
        std::vector<double> vals;
        std::vector<PairTag> tags;
        Eigen::Index r_out = k < nd - 1 ? tr[k].rank : 0;
        Eigen::Index r_in = k > 0 ? tr[k - 1].rank : 0;
        if (r_out + r_in > n) throw NumericalError("singular route: ranks exceed dimension");
        CMatrix nz(n, r_out + r_in);
        for (Eigen::Index j = 0; j < r_out; ++j) {
            nz.col(j) = tr[k].V.col(j);
            vals.push_back(tr[k].sigma[j] * tr[k].sigma[j]);
            tags.push_back(PairTag::ImDelta);
        }
        for (Eigen::Index j = 0; j < r_in; ++j) {
            nz.col(r_out + j) = tr[k - 1].U.col(j);
            vals.push_back(tr[k - 1].sigma[j] * tr[k - 1].sigma[j]);
            tags.push_back(PairTag::ImD);
        }
        CMatrix vecs(n, n);
        vecs.leftCols(r_out + r_in) = nz;
        const Eigen::Index nk = n - r_out - r_in;
        if (nk > 0) {
            Eigen::HouseholderQR<CMatrix> qr(nz);
            CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
            vecs.rightCols(nk) = q.rightCols(nk);
            for (Eigen::Index j = 0; j < nk; ++j) {
                vals.push_back(0.0);
                tags.push_back(PairTag::Kernel);
            }
        }
        fam.spectra.push_back(sort_spectrum(std::move(vals), std::move(vecs), std::move(tags)));
    }
}

void hermitian_route(GradedLaplacianFamily& fam) {
    for (std::size_t k = 0; k < fam.laplacians.size(); ++k) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(fam.laplacians[k]);
        if (es.info() != Eigen::Success)
            throw NumericalError("Hermitian eigensolver failed in degree " + std::to_string(k));
        DegreeSpectrum s;
        s.values = es.eigenvalues();
        s.vectors = es.eigenvectors();
        s.kernel_tol = hermitian_kernel_tolerance(s.values);
        for (Eigen::Index j = 0; j < s.values.size(); ++j) {
            double v = std::abs(s.values[j]);
            if (v > s.kernel_tol / 10 && v < s.kernel_tol * 10)
                fam.warnings.push_back("AmbiguousKernel: degree " + std::to_string(k) +
                                       " eigenvalue " + std::to_string(s.values[j]) +
                                       " near threshold");
        }
        fam.spectra.push_back(std::move(s));
    }
}

}  // namespace

void eigendecompose(GradedLaplacianFamily& fam, EigenRoute route, double tol_eig, bool verify) {
    fam.spectra.clear();
    fam.route = route;
    if (route == EigenRoute::Singular)
        singular_route(fam);
    else
        hermitian_route(fam);
    if (!verify) return;
    for (std::size_t k = 0; k < fam.spectra.size(); ++k) {
        const auto& s = fam.spectra[k];
        const CMatrix& lap = fam.laplacians[k];
        if (lap.size() == 0) continue;
        double nrm = lap.norm();
        double res = (lap - s.vectors * s.values.cast<cplx>().asDiagonal() * s.vectors.adjoint()).norm();
        if (res > tol_eig * std::max(1.0, nrm))
            throw NumericalError("eigendecompose: reconstruction residual " + std::to_string(res) +
                                 " in degree " + std::to_string(k));
        double unit = (s.vectors.adjoint() * s.vectors -
                       CMatrix::Identity(s.vectors.cols(), s.vectors.cols())).norm();
        if (unit > 1e-9 * std::sqrt(static_cast<double>(s.vectors.cols()) + 1.0))
            throw NumericalError("eigendecompose: eigenframe not unitary in degree " +
                                 std::to_string(k));
    }
}

std::vector<int> SpectralSplit::small_counts() const {
    std::vector<int> c;
    for (const auto& v : small) c.push_back(static_cast<int>(v.size()));
    return c;
}

std::vector<int> SpectralSplit::large_counts() const {
    std::vector<int> c;
    for (const auto& v : large) c.push_back(static_cast<int>(v.size()));
    return c;
}

SpectralSplit split_small_large(const GradedLaplacianFamily& fam) {
    if (!fam.has_spectra()) throw StateError("split_small_large: spectra not computed");
    SpectralSplit sp;
    for (const auto& s : fam.spectra) {
        std::vector<int> sm, la;
        for (Eigen::Index j = 0; j < s.values.size(); ++j)
            (s.values[j] <= sp.threshold ? sm : la).push_back(static_cast<int>(j));
        sp.small.push_back(std::move(sm));
        sp.large.push_back(std::move(la));
    }
    return sp;
}

namespace {

bool is_kernel(const DegreeSpectrum& s, Eigen::Index j) {
    return s.tags.empty() ? s.values[j] <= s.kernel_tol : s.tags[j] == PairTag::Kernel;
}

bool in_subset(const DegreeSpectrum& s, Eigen::Index j, Subset sub) {
    switch (sub) {
        case Subset::All: return true;
        case Subset::Perp: return !is_kernel(s, j);
        case Subset::Small: return s.values[j] <= 1.0;
        case Subset::Large: return s.values[j] > 1.0;
    }
    return false;
}

// <B psi_j, psi_j> for every column of the eigenframe.
CVector diagonal_weights(const DegreeSpectrum& s, const DegreeWeights& w, std::size_t k) {
    const Eigen::Index n = s.vectors.cols();
    if (w.empty()) return CVector::Ones(n);
    if (w.size() <= k) throw ShapeError("weight list shorter than the number of degrees");
    const CMatrix& b = w[k];
    if (b.rows() != s.vectors.rows() || b.cols() != s.vectors.rows())
        throw ShapeError("weight for degree " + std::to_string(k) + " is not conformable");
    CMatrix bv = b * s.vectors;
    return (s.vectors.conjugate().cwiseProduct(bv)).colwise().sum().transpose();
}

}  // namespace

cplx heat_supertrace(const GradedLaplacianFamily& fam, const DegreeWeights& w, double t,
                     Subset subset) {
    if (!(t > 0.0)) throw DomainError("heat_supertrace: t must be positive");
    if (!fam.has_spectra()) throw StateError("heat_supertrace: spectra not computed");
    cplx total = 0.0;
    for (std::size_t k = 0; k < fam.spectra.size(); ++k) {
        const auto& s = fam.spectra[k];
        CVector g = diagonal_weights(s, w, k);
        cplx part = 0.0;
        for (Eigen::Index j = 0; j < s.values.size(); ++j)
            if (in_subset(s, j, subset)) part += std::exp(-t * s.values[j]) * g[j];
        total += (k % 2 ? -1.0 : 1.0) * part;
    }
    return total;
}

cplx zeta_via_spectrum(const GradedLaplacianFamily& fam, const DegreeWeights& w, cplx s,
                       double lambda_cut, const ZetaOptions& opt) {
    if (!(lambda_cut >= 0.0)) throw DomainError("zeta_via_spectrum: lambda_cut must be >= 0");
    if (!fam.has_spectra()) throw StateError("zeta_via_spectrum: spectra not computed");
    cplx total = 0.0;
    for (std::size_t k = 0; k < fam.spectra.size(); ++k) {
        const auto& sp = fam.spectra[k];
        CVector g = diagonal_weights(sp, w, k);
        cplx part = 0.0;
        for (Eigen::Index j = 0; j < sp.values.size(); ++j) {
            if (is_kernel(sp, j) || !(sp.values[j] > lambda_cut)) continue;
            part += std::pow(cplx(sp.values[j]), -s) * g[j];
        }
        total += (opt.graded && k % 2 ? -1.0 : 1.0) * part;
    }
    return total;
}

}  // namespace wn
