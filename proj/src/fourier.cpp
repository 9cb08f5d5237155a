#include "cokern/fourier.hpp"

#include <cmath>
#include <numbers>

namespace cokern {
namespace {

Eigen::MatrixXcd kron_conj(const Eigen::MatrixXcd& a) {
  const auto d = a.rows();
  const Eigen::MatrixXcd ac = a.conjugate();
  Eigen::MatrixXcd out(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out.block(i * d, j * d, d, d) = a(i, j) * ac;
  return out;
}

void check_doubled_dim(const FiniteGroupModel& gm) {
  if (gm.rep_dim() * gm.rep_dim() > kMaxDoubledDim || gm.order() > 64) {
    throw ValidationError("group '" + gm.name + "' is too large for brute-force Fourier analysis");
  }
}

}  // namespace

int FiniteGroupModel::inverse(int g) const {
  for (int h = 0; h < order(); ++h)
    if (mult[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] == identity) return h;
  throw ValidationError("element without inverse in group '" + name + "'");
}

void FiniteGroupModel::validate() const {
  const int n = order();
  if (n == 0) throw ValidationError("empty group");
  for (const auto& row : mult)
    if (static_cast<int>(row.size()) != n) throw ValidationError("multiplication table is not square");
  for (int g = 0; g < n; ++g) {
    if (mult[static_cast<std::size_t>(identity)][static_cast<std::size_t>(g)] != g ||
        mult[static_cast<std::size_t>(g)][static_cast<std::size_t>(identity)] != g) {
      throw ValidationError("identity element does not act trivially");
    }
    (void)inverse(g);
  }
  const int stride = std::max(1, n / 8);
  for (int a = 0; a < n; a += stride)
    for (int b = 0; b < n; b += stride)
      for (int c = 0; c < n; c += stride) {
        const auto A = static_cast<std::size_t>(a), B = static_cast<std::size_t>(b), C = static_cast<std::size_t>(c);
        if (mult[static_cast<std::size_t>(mult[A][B])][C] != mult[A][static_cast<std::size_t>(mult[B][C])]) {
          throw ValidationError("multiplication table is not associative");
        }
      }
  if (characters.rows() != num_irreps() || characters.cols() != n) throw ValidationError("character table has wrong shape");
  for (int J = 0; J < num_irreps(); ++J)
    for (int K = 0; K < num_irreps(); ++K) {
      const std::complex<double> ip = characters.row(J).dot(characters.row(K)) / double(n);
      const double want = J == K ? 1.0 : 0.0;
      if (std::abs(ip - want) > 1e-9) throw ValidationError("character rows are not orthonormal");
    }
  if (static_cast<int>(rep.size()) != n) throw ValidationError("need one representation matrix per element");
  for (int a = 0; a < n; a += stride)
    for (int b = 0; b < n; b += stride) {
      const auto& prod = rep[static_cast<std::size_t>(mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])];
      if ((rep[static_cast<std::size_t>(a)] * rep[static_cast<std::size_t>(b)] - prod).cwiseAbs().maxCoeff() > 1e-9) {
        throw ValidationError("representation is not a homomorphism");
      }
    }
}

FiniteGroupModel cyclic_group_model(int m) {
  if (m < 1 || m > 64) throw ValidationError("cyclic group order must lie in [1, 64]");
  FiniteGroupModel gm;
  gm.name = "Z" + std::to_string(m);
  gm.mult.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
  gm.characters.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      gm.mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % m;
      gm.characters(a, b) = std::polar(1.0, 2 * std::numbers::pi * a * b / m);
    }
  gm.irrep_dims.assign(static_cast<std::size_t>(m), 1);
  for (int g = 0; g < m; ++g) {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(m, m);
    for (int h = 0; h < m; ++h) D((g + h) % m, h) = 1.0;
    gm.rep.push_back(std::move(D));
  }
  return gm;
}

FiniteGroupModel zp_star_group_model(const ZpStarGroup& grp) {
  const int n = static_cast<int>(grp.order());
  if (n > 64) throw ValidationError("Z*_p model limited to p <= 65");
  FiniteGroupModel gm;
  gm.name = "Zstar" + std::to_string(grp.p());
  gm.identity = 0;
  gm.mult.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<int> dlog(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dlog[static_cast<std::size_t>(i)] = static_cast<int>(dlog_brute(grp, static_cast<std::uint64_t>(i + 1)));
  gm.characters.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      gm.mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          static_cast<int>(grp.mul(static_cast<std::uint64_t>(a + 1), static_cast<std::uint64_t>(b + 1))) - 1;
      gm.characters(a, b) = std::polar(1.0, 2 * std::numbers::pi * a * dlog[static_cast<std::size_t>(b)] / n);
    }
  gm.irrep_dims.assign(static_cast<std::size_t>(n), 1);
  for (int x = 0; x < n; ++x) {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    for (int z = 0; z < n; ++z) D(gm.mult[static_cast<std::size_t>(x)][static_cast<std::size_t>(z)], z) = 1.0;
    gm.rep.push_back(std::move(D));
  }
  return gm;
}

Eigen::MatrixXcd irrep_projector(const FiniteGroupModel& gm, int J) {
  check_doubled_dim(gm);
  if (J < 0 || J >= gm.num_irreps()) throw ValidationError("irrep index out of range");
  const auto d2 = static_cast<Eigen::Index>(gm.rep_dim()) * gm.rep_dim();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d2, d2);
  for (int g = 0; g < gm.order(); ++g) P += std::conj(gm.characters(J, g)) * kron_conj(gm.rep[static_cast<std::size_t>(g)]);
  return P * (static_cast<double>(gm.irrep_dims[static_cast<std::size_t>(J)]) / gm.order());
}

std::vector<Eigen::MatrixXcd> kernel_fourier_coefficients(const FiniteGroupModel& gm, const Eigen::VectorXcd& psi) {
  check_doubled_dim(gm);
  if (psi.size() != gm.rep_dim()) throw ValidationError("fiducial dimension does not match the representation");
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw ValidationError("fiducial must be normalized");
  const auto d = psi.size();
  Eigen::VectorXcd doubled(d * d);
  for (Eigen::Index i = 0; i < d; ++i) doubled.segment(i * d, d) = psi(i) * psi.conjugate();
  std::vector<Eigen::MatrixXcd> out;
  for (int J = 0; J < gm.num_irreps(); ++J) {
    const Eigen::VectorXcd v = irrep_projector(gm, J) * doubled;
    out.push_back((static_cast<double>(gm.order()) / gm.irrep_dims[static_cast<std::size_t>(J)]) * (v * v.adjoint()));
  }
  return out;
}

std::vector<double> fourier_invert(const std::vector<Eigen::MatrixXcd>& coeffs, const FiniteGroupModel& gm) {
  check_doubled_dim(gm);
  if (static_cast<int>(coeffs.size()) != gm.num_irreps()) {
    throw ValidationError("expected " + std::to_string(gm.num_irreps()) + " Fourier coefficients, got " +
                          std::to_string(coeffs.size()));
  }
  const auto d2 = static_cast<Eigen::Index>(gm.rep_dim()) * gm.rep_dim();
  for (const auto& c : coeffs)
    if (c.rows() != d2 || c.cols() != d2) throw ValidationError("Fourier coefficient has wrong shape");
  std::vector<double> l(static_cast<std::size_t>(gm.order()));
  for (int g = 0; g < gm.order(); ++g) {
    const Eigen::MatrixXcd W = kron_conj(gm.rep[static_cast<std::size_t>(gm.inverse(g))]);
    std::complex<double> acc = 0.0;
    for (int J = 0; J < gm.num_irreps(); ++J) {
      acc += static_cast<double>(gm.irrep_dims[static_cast<std::size_t>(J)]) *
             (coeffs[static_cast<std::size_t>(J)].cwiseProduct(W.transpose())).sum();
    }
    l[static_cast<std::size_t>(g)] = acc.real() / gm.order();
  }
  return l;
}

std::vector<double> kernel_function_direct(const FiniteGroupModel& gm, const Eigen::VectorXcd& psi) {
  if (psi.size() != gm.rep_dim()) throw ValidationError("fiducial dimension does not match the representation");
  std::vector<double> l;
  for (const auto& D : gm.rep) l.push_back(std::norm(psi.dot(D.adjoint() * psi)));
  return l;
}

std::vector<std::complex<double>> scalar_fourier_transform(const FiniteGroupModel& gm, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != gm.order()) throw ValidationError("function must have one value per element");
  std::vector<std::complex<double>> out;
  for (int J = 0; J < gm.num_irreps(); ++J) {
    std::complex<double> s = 0.0;
    for (int g = 0; g < gm.order(); ++g) s += f[static_cast<std::size_t>(g)] * gm.characters(J, g);
    out.push_back(s);
  }
  return out;
}

Eigen::VectorXcd subset_fiducial(const ZpStarGroup& grp) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grp.order()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(grp.subset().size()));
  for (auto s : grp.subset()) psi(static_cast<Eigen::Index>(s) - 1) = amp;
  return psi;
}

}  // namespace cokern
