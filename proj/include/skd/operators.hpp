#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "skd/errors.hpp"

namespace skd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerances shared across the library. Entrywise deviations up to kHermTol
// from exact Hermiticity (resp. kPsdTol below zero) are treated as rounding.
inline constexpr double kHermTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kNormTol = 1e-12;
// Strict inequalities in distillability conditions require this margin.
inline constexpr double kStrictTol = 1e-9;
// Default cap on any matrix dimension materialized by the library.
inline constexpr int kDefaultMaxDim = 4096;

/// Dense Hermitian operator on a finite-dimensional space. The stored matrix
/// is symmetrized ((A + A^dag)/2) at construction; inputs farther than `tol`
/// from Hermitian are rejected.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries, double tol = kHermTol);

    static HermitianOperator identity(int dim);
    static HermitianOperator zero(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& entries() const { return m_; }
    double trace() const { return m_.trace().real(); }

private:
    Matrix m_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

/// State vector. When `normalized` is set the squared amplitudes must sum to
/// one within kNormTol.
class KetVector {
public:
    explicit KetVector(Vector amplitudes, bool normalized = true, double tol = kNormTol);

    int dim() const { return static_cast<int>(v_.size()); }
    const Vector& amplitudes() const { return v_; }

private:
    Vector v_;
};

/// Sum of absolute eigenvalues. Equals the trace for positive semidefinite
/// input; the general case goes through a full eigendecomposition.
double trace_norm(const HermitianOperator& a);

double min_eigenvalue(const HermitianOperator& a);

/// Eigenvalues in ascending order.
Eigen::VectorXd eigenvalues(const HermitianOperator& a);

/// Re tr(ab). Real automatically for Hermitian arguments.
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// Kronecker product a (x) b. Refuses results larger than max_dim.
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b,
                         int max_dim = kDefaultMaxDim);

/// Trace out every subsystem not listed in `keep`. `dims` lists the factor
/// dimensions in tensor order; `keep` holds distinct indices into it. Kept
/// factors retain their original relative order; an empty `keep` leaves the
/// 1x1 full trace.
HermitianOperator partial_trace(const HermitianOperator& a, const std::vector<int>& dims,
                                const std::vector<int>& keep);

/// Transpose of the second factor of a bipartite operator.
HermitianOperator partial_transpose(const HermitianOperator& a, std::pair<int, int> dims);

/// Reorder tensor factors. perm[k] names the old factor placed at new slot k.
HermitianOperator permute_systems(const HermitianOperator& a, const std::vector<int>& dims,
                                  const std::vector<int>& perm);

struct PptResult {
    bool ppt;
    double min_eigenvalue;
};

/// Positivity of the partial transpose across the given bipartite cut.
/// Expects a density operator (trace one within tolerance).
PptResult is_ppt(const HermitianOperator& a, std::pair<int, int> dims, double tol = kPsdTol);

/// Normalized projectors onto the symmetric and antisymmetric subspaces of
/// C^d (x) C^d, with ranks d(d+1)/2 and d(d-1)/2. Requires d >= 2.
std::pair<HermitianOperator, HermitianOperator> sym_antisym_projectors(int d);

/// The four Bell vectors on C^2 (x) C^2, index order:
///   0: (|00> + |11>)/sqrt2   1: (|00> - |11>)/sqrt2
///   2: (|01> + |10>)/sqrt2   3: (|01> - |10>)/sqrt2
const std::array<KetVector, 4>& bell_basis();

HermitianOperator projector(const KetVector& v);

}  // namespace skd
