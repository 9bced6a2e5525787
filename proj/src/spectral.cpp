#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bessel_like/error.hpp"
#include "bessel_like/krein.hpp"

extern "C" void dbdsqr_(const char* uplo, const int* n, const int* ncvt, const int* nru,
                        const int* ncc, double* d, double* e, double* vt, const int* ldvt,
                        double* u, const int* ldu, double* c, const int* ldc, double* work,
                        int* info, std::size_t uplo_len);

namespace bessel_like {

namespace {

// Singular values of the upper bidiagonal (d, e) and the first row of the right
// singular vectors. Returns lambda = sigma^2 ascending with weights z0^2 / mass0.
SpectralStep bidiagonal_spectrum(std::vector<double> d, std::vector<double> e, double mass0) {
  const int n = static_cast<int>(d.size());
  const int ncvt = 1, nru = 0, ncc = 0, one = 1;
  std::vector<double> vt(d.size(), 0.0), work(4 * d.size());
  vt[0] = 1.0;
  e.resize(std::max<std::size_t>(d.size(), 1));
  int info = 0;
  // VT is n x 1; on exit it holds P^T e_0, the first components of the eigenvectors.
  dbdsqr_("U", &n, &ncvt, &nru, &ncc, d.data(), e.data(), vt.data(), &n, nullptr, &one, nullptr,
          &one, work.data(), &info, 1);
  if (info != 0) {
    std::ostringstream os;
    os << "bidiagonal SVD failed (info = " << info << ")";
    throw NumericError(os.str());
  }
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  SpectralStep out;
  out.lambda.reserve(d.size());
  out.weight.reserve(d.size());
  for (std::size_t k : idx) {
    out.lambda.push_back(d[k] * d[k]);
    out.weight.push_back(vt[k] * vt[k] / mass0);
  }
  return out;
}

}  // namespace

double SpectralStep::sigma(double lam) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < lambda.size() && lambda[k] <= lam; ++k) sum += weight[k];
  return sum;
}

double SpectralStep::characteristic(double s) const {
  double sum = offset;
  for (std::size_t k = 0; k < lambda.size(); ++k) sum += weight[k] / (s + lambda[k]);
  return sum;
}

double SpectralStep::laplace(double t) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) sum += weight[k] * std::exp(-lambda[k] * t);
  return sum;
}

// M^{-1/2} K M^{-1/2} = G^T G with G upper bidiagonal, one row per scale gap.
SpectralStep spectral_sigma(const CanonicalGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> d(n), e(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d[i] = -1.0 / std::sqrt(grid.ds[i] * grid.dm[i]);
    e[i] = 1.0 / std::sqrt(grid.ds[i] * grid.dm[i + 1]);
  }
  d[n - 1] = grid.right == Boundary::absorbing ? -1.0 / std::sqrt(grid.ds_end * grid.dm[n - 1]) : 0.0;
  SpectralStep out = bidiagonal_spectrum(std::move(d), std::move(e), grid.dm[0]);
  if (grid.right == Boundary::reflecting) out.lambda[0] = 0.0;
  out.x_max = grid.x_max;
  return out;
}

// Dual string: masses ds_0..ds_{n-2}, gaps dm_1..dm_{n-1} with a Dirichlet end, and the
// leading gap dm_0 as the constant term of h*.
SpectralStep spectral_sigma_star(const CanonicalGrid& grid) {
  if (grid.right != Boundary::reflecting)
    throw ValidationError("spectral_sigma_star needs a reflecting grid");
  const std::size_t n = grid.size() - 1;
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = -1.0 / std::sqrt(grid.dm[j + 1] * grid.ds[j]);
    if (j + 1 < n) e[j] = 1.0 / std::sqrt(grid.dm[j + 1] * grid.ds[j + 1]);
  }
  SpectralStep out = bidiagonal_spectrum(std::move(d), std::move(e), grid.ds[0]);
  out.offset = grid.dm[0];
  out.x_max = grid.x_max;
  return out;
}

}  // namespace bessel_like
