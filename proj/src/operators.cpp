#include "skd/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace skd {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw validation_error(what);
}

// Flat index offsets of a mixed-radix enumeration over the listed factors.
std::vector<long> factor_offsets(const std::vector<int>& dims, const std::vector<int>& which,
                                 const std::vector<long>& stride) {
    long count = 1;
    for (int k : which) count *= dims[static_cast<size_t>(k)];
    std::vector<long> offsets(static_cast<size_t>(count), 0);
    long repeat = 1;
    for (auto it = which.rbegin(); it != which.rend(); ++it) {
        const int d = dims[static_cast<size_t>(*it)];
        const long s = stride[static_cast<size_t>(*it)];
        for (long x = 0; x < count; ++x) {
            const long digit = (x / repeat) % d;
            offsets[static_cast<size_t>(x)] += digit * s;
        }
        repeat *= d;
    }
    return offsets;
}

std::vector<long> strides_of(const std::vector<int>& dims) {
    std::vector<long> stride(dims.size());
    long acc = 1;
    for (size_t i = dims.size(); i-- > 0;) {
        stride[i] = acc;
        acc *= dims[i];
    }
    return stride;
}

long total_dim(const std::vector<int>& dims) {
    long acc = 1;
    for (int d : dims) acc *= d;
    return acc;
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries, double tol) {
    require(entries.rows() == entries.cols(), "HermitianOperator: matrix must be square");
    require(entries.rows() >= 1, "HermitianOperator: dimension must be at least 1");
    const double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw validation_error("HermitianOperator: input deviates from Hermitian by " +
                               std::to_string(dev));
    m_ = 0.5 * (entries + entries.adjoint().eval());
}

HermitianOperator HermitianOperator::identity(int dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw validation_error("operator+: dimension mismatch");
    return HermitianOperator(a.entries() + b.entries());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw validation_error("operator-: dimension mismatch");
    return HermitianOperator(a.entries() - b.entries());
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
    return HermitianOperator(s * a.entries());
}

KetVector::KetVector(Vector amplitudes, bool normalized, double tol) : v_(std::move(amplitudes)) {
    require(v_.size() >= 1, "KetVector: dimension must be at least 1");
    if (normalized) {
        const double n2 = v_.squaredNorm();
        if (std::abs(n2 - 1.0) > tol)
            throw validation_error("KetVector: squared norm " + std::to_string(n2) +
                                   " is not 1 within tolerance");
    }
}

double trace_norm(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.entries(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.entries(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::VectorXd eigenvalues(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.entries(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw validation_error("trace_product: dimension mismatch");
    return (a.entries().array() * b.entries().transpose().array()).sum().real();
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b, int max_dim) {
    const long na = a.dim();
    const long nb = b.dim();
    if (na * nb > max_dim)
        throw resource_error("tensor: result dimension " + std::to_string(na * nb) +
                             " exceeds limit " + std::to_string(max_dim));
    Matrix out(na * nb, na * nb);
    for (long i = 0; i < na; ++i)
        for (long j = 0; j < na; ++j)
            out.block(i * nb, j * nb, nb, nb) = a.entries()(i, j) * b.entries();
    return HermitianOperator(std::move(out));
}

HermitianOperator partial_trace(const HermitianOperator& a, const std::vector<int>& dims,
                                const std::vector<int>& keep) {
    require(!dims.empty(), "partial_trace: dims must be nonempty");
    for (int d : dims) require(d >= 1, "partial_trace: factor dimensions must be positive");
    require(total_dim(dims) == a.dim(), "partial_trace: dims do not factor the operator dimension");
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "partial_trace: keep indices must be distinct");
    for (int k : sorted)
        require(k >= 0 && k < static_cast<int>(dims.size()), "partial_trace: keep index out of range");

    std::vector<int> traced;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i)
        if (!std::binary_search(sorted.begin(), sorted.end(), i)) traced.push_back(i);

    const auto stride = strides_of(dims);
    const auto keep_off = factor_offsets(dims, sorted, stride);
    const auto trace_off = factor_offsets(dims, traced, stride);

    const long dk = static_cast<long>(keep_off.size());
    Matrix out = Matrix::Zero(dk, dk);
    for (long i = 0; i < dk; ++i)
        for (long j = 0; j < dk; ++j) {
            Complex acc = 0.0;
            for (long t : trace_off) acc += a.entries()(keep_off[i] + t, keep_off[j] + t);
            out(i, j) = acc;
        }
    return HermitianOperator(std::move(out));
}

HermitianOperator partial_transpose(const HermitianOperator& a, std::pair<int, int> dims) {
    const long da = dims.first;
    const long db = dims.second;
    require(da >= 1 && db >= 1, "partial_transpose: dimensions must be positive");
    require(da * db == a.dim(), "partial_transpose: dims do not factor the operator dimension");
    Matrix out(a.dim(), a.dim());
    for (long i = 0; i < da; ++i)
        for (long j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a.entries().block(i * db, j * db, db, db).transpose();
    return HermitianOperator(std::move(out));
}

HermitianOperator permute_systems(const HermitianOperator& a, const std::vector<int>& dims,
                                  const std::vector<int>& perm) {
    require(total_dim(dims) == a.dim(),
            "permute_systems: dims do not factor the operator dimension");
    require(perm.size() == dims.size(), "permute_systems: perm length mismatch");
    std::vector<int> seen(dims.size(), 0);
    for (int p : perm) {
        require(p >= 0 && p < static_cast<int>(dims.size()), "permute_systems: perm index out of range");
        require(!seen[static_cast<size_t>(p)]++, "permute_systems: perm indices must be distinct");
    }

    const long n = a.dim();
    const auto old_stride = strides_of(dims);
    std::vector<int> new_dims(dims.size());
    for (size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[static_cast<size_t>(perm[k])];
    const auto new_stride = strides_of(new_dims);

    // map[i] = flat index of basis vector i after reordering factors.
    std::vector<long> map(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        long out = 0;
        for (size_t k = 0; k < perm.size(); ++k) {
            const int sys = perm[k];
            const long digit = (i / old_stride[static_cast<size_t>(sys)]) % dims[static_cast<size_t>(sys)];
            out += digit * new_stride[k];
        }
        map[static_cast<size_t>(i)] = out;
    }

    Matrix out(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out(map[static_cast<size_t>(i)], map[static_cast<size_t>(j)]) = a.entries()(i, j);
    return HermitianOperator(std::move(out));
}

PptResult is_ppt(const HermitianOperator& a, std::pair<int, int> dims, double tol) {
    require(std::abs(a.trace() - 1.0) <= kHermTol, "is_ppt: input must have unit trace");
    const double lo = min_eigenvalue(partial_transpose(a, dims));
    return PptResult{lo >= -tol, lo};
}

std::pair<HermitianOperator, HermitianOperator> sym_antisym_projectors(int d) {
    require(d >= 2, "sym_antisym_projectors: d must be at least 2");
    const long n = static_cast<long>(d) * d;
    Matrix swap = Matrix::Zero(n, n);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
    const Matrix id = Matrix::Identity(n, n);
    const double rank_s = 0.5 * d * (d + 1);
    const double rank_a = 0.5 * d * (d - 1);
    HermitianOperator rho_s(0.5 / rank_s * (id + swap));
    HermitianOperator rho_a(0.5 / rank_a * (id - swap));
    return {std::move(rho_s), std::move(rho_a)};
}

const std::array<KetVector, 4>& bell_basis() {
    static const std::array<KetVector, 4> basis = [] {
        const double s = 1.0 / std::sqrt(2.0);
        Vector b0(4), b1(4), b2(4), b3(4);
        b0 << s, 0, 0, s;
        b1 << s, 0, 0, -s;
        b2 << 0, s, s, 0;
        b3 << 0, s, -s, 0;
        return std::array<KetVector, 4>{KetVector(b0), KetVector(b1), KetVector(b2), KetVector(b3)};
    }();
    return basis;
}

HermitianOperator projector(const KetVector& v) {
    return HermitianOperator(v.amplitudes() * v.amplitudes().adjoint());
}

}  // namespace skd
