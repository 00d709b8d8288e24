#include "nlocal/matrixkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlocal {

namespace {

void require_same_dim(const CMat& a, const CMat& b, const char* what) {
  if (a.dim() != b.dim())
    throw shape_error(std::string(what) + ": dimension mismatch " +
                      std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
}

}  // namespace

CMat& CMat::operator+=(const CMat& o) {
  require_same_dim(*this, o, "operator+=");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  require_same_dim(*this, o, "operator-=");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMat& CMat::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

double dot(const Vec3& u, const Vec3& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int r = 0; r < 3; ++r)
    out[r] = m(r, 0) * v[0] + m(r, 1) * v[1] + m(r, 2) * v[2];
  return out;
}

double bilinear(const Vec3& u, const Mat3& m, const Vec3& v) {
  return dot(u, mat3_apply(m, v));
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
      out(r, c) = s;
    }
  return out;
}

Mat3 mat3_transpose(const Mat3& m) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out(r, c) = m(c, r);
  return out;
}

namespace {

template <class T>
T pairwise_sum_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T s{};
    for (const T& x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum_impl(xs.first(half)) + pairwise_sum_impl(xs.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_impl(xs); }
cplx pairwise_sum(std::span<const cplx> xs) { return pairwise_sum_impl(xs); }

CMat kron(const CMat& a, const CMat& b, Exec ex) {
  const std::int64_t da = static_cast<std::int64_t>(a.dim());
  const std::int64_t db = static_cast<std::int64_t>(b.dim());
  const std::int64_t d = da * db;
  CMat out(static_cast<std::size_t>(d));
  const bool par = (ex == Exec::Parallel);
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t r = 0; r < d; ++r) {
    const std::int64_t i1 = r / db;
    const std::int64_t i2 = r % db;
    for (std::int64_t j1 = 0; j1 < da; ++j1) {
      const cplx av = a(i1, j1);
      if (av == cplx{}) continue;
      for (std::int64_t j2 = 0; j2 < db; ++j2)
        out(r, j1 * db + j2) = av * b(i2, j2);
    }
  }
  return out;
}

CMat matmul(const CMat& a, const CMat& b, Exec ex) {
  require_same_dim(a, b, "matmul");
  const std::int64_t d = static_cast<std::int64_t>(a.dim());
  CMat out(static_cast<std::size_t>(d));
  const bool par = (ex == Exec::Parallel) && d >= 64;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t r = 0; r < d; ++r)
    for (std::int64_t k = 0; k < d; ++k) {
      const cplx av = a(r, k);
      if (av == cplx{}) continue;
      for (std::int64_t c = 0; c < d; ++c) out(r, c) += av * b(k, c);
    }
  return out;
}

CMat adjoint(const CMat& m) {
  CMat out(m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) out(c, r) = std::conj(m(r, c));
  return out;
}

cplx trace(const CMat& m) {
  cplx s{};
  for (std::size_t i = 0; i < m.dim(); ++i) s += m(i, i);
  return s;
}

cplx trace_product(const CMat& a, const CMat& b, Exec ex) {
  require_same_dim(a, b, "trace_product");
  const std::int64_t d = static_cast<std::int64_t>(a.dim());
  std::vector<cplx> row(static_cast<std::size_t>(d));
  const bool par = (ex == Exec::Parallel) && d >= 64;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t r = 0; r < d; ++r) {
    cplx s{};
    for (std::int64_t k = 0; k < d; ++k) s += a(r, k) * b(k, r);
    row[r] = s;
  }
  return pairwise_sum(std::span<const cplx>(row));
}

namespace ref {

CMat kron(const CMat& a, const CMat& b) {
  const std::size_t da = a.dim(), db = b.dim();
  CMat out(da * db);
  for (std::size_t i1 = 0; i1 < da; ++i1)
    for (std::size_t j1 = 0; j1 < da; ++j1)
      for (std::size_t i2 = 0; i2 < db; ++i2)
        for (std::size_t j2 = 0; j2 < db; ++j2)
          out(i1 * db + i2, j1 * db + j2) = a(i1, j1) * b(i2, j2);
  return out;
}

CMat matmul(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "ref::matmul");
  const std::size_t d = a.dim();
  CMat out(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      cplx s{};
      for (std::size_t k = 0; k < d; ++k) s += a(r, k) * b(k, c);
      out(r, c) = s;
    }
  return out;
}

cplx trace_product(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "ref::trace_product");
  cplx s{};
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t k = 0; k < a.dim(); ++k) s += a(r, k) * b(k, r);
  return s;
}

}  // namespace ref

CMat partial_trace(const CMat& m, int qubit_count,
                   const std::vector<int>& traced) {
  if (qubit_count <= 0 || qubit_count > 30)
    throw shape_error("partial_trace: bad qubit_count");
  const std::size_t d = std::size_t{1} << qubit_count;
  if (m.dim() != d)
    throw shape_error("partial_trace: operator dimension " +
                      std::to_string(m.dim()) + " is not 2^" +
                      std::to_string(qubit_count));

  std::vector<int> tr = traced;
  std::sort(tr.begin(), tr.end());
  if (std::adjacent_find(tr.begin(), tr.end()) != tr.end())
    throw shape_error("partial_trace: repeated qubit index");
  for (int q : tr)
    if (q < 0 || q >= qubit_count)
      throw shape_error("partial_trace: qubit index out of range");

  std::vector<int> kept;
  for (int q = 0; q < qubit_count; ++q)
    if (!std::binary_search(tr.begin(), tr.end(), q)) kept.push_back(q);

  // Qubit q occupies bit (qubit_count - 1 - q) of a row/column index.
  auto embed = [qubit_count](std::size_t bits, const std::vector<int>& where) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < where.size(); ++i) {
      const std::size_t bit = (bits >> (where.size() - 1 - i)) & 1u;
      out |= bit << (qubit_count - 1 - where[i]);
    }
    return out;
  };

  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << tr.size();
  CMat out(dk);
  for (std::size_t r = 0; r < dk; ++r) {
    const std::size_t rk = embed(r, kept);
    for (std::size_t c = 0; c < dk; ++c) {
      const std::size_t ck = embed(c, kept);
      cplx s{};
      for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t tt = embed(t, tr);
        s += m(rk | tt, ck | tt);
      }
      out(r, c) = s;
    }
  }
  return out;
}

bool is_hermitian(const CMat& m, double tol) {
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = r; c < m.dim(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "max_abs_diff");
  double worst = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

std::vector<double> hermitian_eigenvalues(const CMat& m) {
  const std::size_t d = m.dim();
  if (d == 0) throw shape_error("hermitian_eigenvalues: empty matrix");

  // Work on the Hermitian part so slightly perturbed inputs are accepted.
  CMat a(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));

  double scale = 0;
  for (const cplx& x : a.data()) scale = std::max(scale, std::abs(x));
  if (scale == 0) return std::vector<double>(d, 0.0);

  auto off_norm = [&]() {
    double s = 0;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r + 1; c < d; ++c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  const double stop = 1e-15 * scale * static_cast<double>(d);
  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx apq = a(p, q);
        const double absc = std::abs(apq);
        if (absc <= 1e-300) {
          a(p, q) = a(q, p) = 0;
          continue;
        }
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx u = apq / absc;       // phase of the pivot
        const cplx ubar = std::conj(u);
        const double tau = (aqq - app) / (2.0 * absc);
        const double t =
            (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;

        for (std::size_t r = 0; r < d; ++r) {
          if (r == p || r == q) continue;
          const cplx arp = a(r, p);
          const cplx arq = a(r, q) * ubar;
          a(r, p) = cs * arp - sn * arq;
          a(r, q) = sn * arp + cs * arq;
          a(p, r) = std::conj(a(r, p));
          a(q, r) = std::conj(a(r, q));
        }
        a(p, p) = app - t * absc;
        a(q, q) = aqq + t * absc;
        a(p, q) = a(q, p) = 0;
      }
    }
  }

  std::vector<double> eig(d);
  for (std::size_t i = 0; i < d; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

void check_density(const CMat& m) {
  if (m.dim() == 0) throw validation_error("density check: empty matrix");
  if (!is_hermitian(m, kHermTol))
    throw validation_error("density check: not Hermitian within 1e-12");
  const cplx tr = trace(m);
  if (std::abs(tr - cplx{1.0, 0.0}) > kTraceTol)
    throw validation_error("density check: trace deviates from 1 by more than 1e-12");
  const std::vector<double> eig = hermitian_eigenvalues(m);
  if (eig.front() < kEigenFloor)
    throw validation_error("density check: eigenvalue " +
                           std::to_string(eig.front()) + " below -1e-10");
}

std::array<double, 3> singular_values_3x3(const Mat3& w) {
  const Mat3 b = mat3_mul(mat3_transpose(w), w);
  CMat h(3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) h(r, c) = b(r, c);
  const std::vector<double> eig = hermitian_eigenvalues(h);  // ascending
  std::array<double, 3> sv{};
  for (int i = 0; i < 3; ++i) sv[i] = std::sqrt(std::max(0.0, eig[2 - i]));
  return sv;
}

}  // namespace nlocal
