#pragma once

#include "wn/numerics.hpp"

#include <string>
#include <vector>

namespace wn {

struct SpectralParameter {
    double mu = 0.0;
    double nu = 0.0;

    SpectralParameter() = default;
    SpectralParameter(double mu_, double nu_);
    static SpectralParameter from(cplx z) { return {z.real(), z.imag()}; }
    cplx z() const { return {mu, nu}; }
};

// Finite cochain complex: d[k] maps degree k (size dims[k]) to degree k+1.
struct GradedMatrixComplex {
    std::vector<int> dims;
    std::vector<CMatrix> d;
    std::string label;
    std::string source;

    int top_degree() const { return static_cast<int>(dims.size()) - 1; }
    // Throws ShapeError unless d[k] is dims[k+1] x dims[k] for every k.
    void check_shapes() const;
    // max_k ||d[k+1] d[k]||, Frobenius.
    double d2_residual() const;
    double max_norm() const;
};

enum class EigenRoute {
    Singular,   // eigenpairs from singular triples of the differentials
    Hermitian,  // dense Hermitian eigensolve of each Laplacian
};

// Which part of the degree-k space an eigenvector spans.
enum class PairTag { Kernel, ImD, ImDelta };

struct DegreeSpectrum {
    RVector values;             // ascending
    CMatrix vectors;            // orthonormal columns
    std::vector<PairTag> tags;  // empty for the Hermitian route
    double kernel_tol = 0.0;
};

struct GradedLaplacianFamily {
    GradedMatrixComplex complex;
    std::vector<CMatrix> laplacians;
    std::vector<DegreeSpectrum> spectra;
    double d2_residual = 0.0;
    double commutation_residual = 0.0;  // max_k ||d_k D_k - D_{k+1} d_k||
    EigenRoute route = EigenRoute::Singular;
    std::vector<std::string> warnings;

    bool has_spectra() const { return !spectra.empty(); }
    int degrees() const { return static_cast<int>(complex.dims.size()); }
    std::vector<int> betti() const;
};

struct AssembleOptions {
    double tol_complex_rel = 1e-10;  // relative to ||d||^2
    bool exact_source = false;       // require d^2 == 0 bit for bit
};

GradedLaplacianFamily assemble_laplacians(const GradedMatrixComplex& complex,
                                          const AssembleOptions& opt = {});

// Fills family.spectra. With verify set, the reconstruction residual is
// checked against tol_eig and the eigenframes against unitarity.
void eigendecompose(GradedLaplacianFamily& family, EigenRoute route = EigenRoute::Singular,
                    double tol_eig = 1e-10, bool verify = true);

// SVD rank cut shared by every singular-value based rank decision.
double rank_tolerance(const RVector& singular_values, Eigen::Index rows, Eigen::Index cols);

// Hermitian kernel threshold 1e-9 (1 + lambda_max).
double hermitian_kernel_tolerance(const RVector& eigenvalues);

struct SpectralSplit {
    std::vector<std::vector<int>> small;  // per degree, indices with value <= 1
    std::vector<std::vector<int>> large;
    double threshold = 1.0;

    std::vector<int> small_counts() const;
    std::vector<int> large_counts() const;
};

SpectralSplit split_small_large(const GradedLaplacianFamily& family);

enum class Subset { All, Perp, Small, Large };

// Per-degree weight operators B_k; an empty vector means the identity.
using DegreeWeights = std::vector<CMatrix>;

cplx heat_supertrace(const GradedLaplacianFamily& family, const DegreeWeights& weight, double t,
                     Subset subset = Subset::All);

struct ZetaOptions {
    bool graded = true;  // apply (-1)^k per degree
};

cplx zeta_via_spectrum(const GradedLaplacianFamily& family, const DegreeWeights& weight, cplx s,
                       double lambda_cut, const ZetaOptions& opt = {});

// Singular triples (u_j, sigma_j, v_j) of one matrix, sigma descending.
struct SingularTriples {
    RVector sigma;
    CMatrix U;
    CMatrix V;
    Eigen::Index rank = 0;
};
SingularTriples singular_triples(const CMatrix& a);

}  // namespace wn
