#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlocal {

using cplx = std::complex<double>;

// Tolerances shared by every density-operator and POVM check.
inline constexpr double kHermTol    = 1e-12;  // max |A - A^dag| entry
inline constexpr double kTraceTol   = 1e-12;  // |Tr(rho) - 1|
inline constexpr double kEigenFloor = -1e-10; // smallest admissible eigenvalue

struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Execution policy for the data-parallel kernels. Parallel is a no-op when
// the project is built without OpenMP.
enum class Exec { Serial, Parallel };

/// Dense square complex matrix, row-major storage.
class CMat {
 public:
  CMat() = default;
  explicit CMat(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  static CMat identity(std::size_t dim) {
    CMat m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }

  cplx& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return a_[r * dim_ + c];
  }

  std::span<cplx> data() { return a_; }
  std::span<const cplx> data() const { return a_; }

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cplx s);

  friend CMat operator+(CMat m, const CMat& o) { return m += o; }
  friend CMat operator-(CMat m, const CMat& o) { return m -= o; }
  friend CMat operator*(cplx s, CMat m) { return m *= s; }
  friend CMat operator*(CMat m, cplx s) { return m *= s; }

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

/// 3x3 real matrix (correlation tensors and their relatives).
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int r, int c) { return a[3 * r + c]; }
  double operator()(int r, int c) const { return a[3 * r + c]; }

  static Mat3 diag(double x, double y, double z) {
    Mat3 m;
    m(0, 0) = x;
    m(1, 1) = y;
    m(2, 2) = z;
    return m;
  }
};

using Vec3 = std::array<double, 3>;

double dot(const Vec3& u, const Vec3& v);
double norm(const Vec3& v);
Vec3 mat3_apply(const Mat3& m, const Vec3& v);   // m v
double bilinear(const Vec3& u, const Mat3& m, const Vec3& v);  // u^T m v
Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Mat3 mat3_transpose(const Mat3& m);

/// Deterministic pairwise summation; the result does not depend on how a
/// caller chunked the term array across threads.
double pairwise_sum(std::span<const double> xs);
cplx pairwise_sum(std::span<const cplx> xs);

CMat kron(const CMat& a, const CMat& b, Exec ex = Exec::Parallel);
CMat matmul(const CMat& a, const CMat& b, Exec ex = Exec::Parallel);
CMat adjoint(const CMat& m);
cplx trace(const CMat& m);
/// Tr[A B] without forming the product.
cplx trace_product(const CMat& a, const CMat& b, Exec ex = Exec::Parallel);

/// Independently coded serial reference kernels, kept for tests and the
/// benchmark target.
namespace ref {
CMat kron(const CMat& a, const CMat& b);
CMat matmul(const CMat& a, const CMat& b);
cplx trace_product(const CMat& a, const CMat& b);
}  // namespace ref

/// Partial trace over `traced` qubits of a 2^qubit_count dimensional
/// operator. Qubit 0 is the leftmost tensor factor (most significant bits).
CMat partial_trace(const CMat& m, int qubit_count,
                   const std::vector<int>& traced);

bool is_hermitian(const CMat& m, double tol = kHermTol);
double max_abs_diff(const CMat& a, const CMat& b);

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic complex Jacobi;
/// the input is symmetrized first so near-Hermitian inputs are accepted.
std::vector<double> hermitian_eigenvalues(const CMat& m);

/// Throws validation_error unless `m` satisfies the density-operator
/// invariants (Hermitian within kHermTol, unit trace within kTraceTol,
/// eigenvalues >= kEigenFloor).
void check_density(const CMat& m);

/// Singular values of a real 3x3 matrix, descending. Symmetric Jacobi
/// eigen-solve of w^T w; no external SVD dependency.
std::array<double, 3> singular_values_3x3(const Mat3& w);

}  // namespace nlocal
