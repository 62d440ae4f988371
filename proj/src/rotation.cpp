#include "pnrmzi/rotation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "pnrmzi/errors.hpp"

namespace pnrmzi {

namespace {

using cplx = std::complex<double>;

// i^k for k mod 4
cplx i_pow(std::ptrdiff_t k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// <n_b + 1 | G | n_b> for G = -i J_y in the n_b-indexed Dicke basis.
double generator_coupling(std::size_t total_n, std::size_t k) {
  return 0.5 * std::sqrt(static_cast<double>(total_n - k) * static_cast<double>(k + 1));
}

}  // namespace

DickeIndex DickeIndex::from_counts(std::size_t n_a, std::size_t n_b) {
  return DickeIndex{n_a + n_b, static_cast<int>(n_a) - static_cast<int>(n_b)};
}

bool DickeIndex::valid() const {
  const auto n = static_cast<long long>(total_n);
  const auto m = static_cast<long long>(mu_twice);
  return std::llabs(m) <= n && ((n - m) % 2 == 0);
}

YRotation::YRotation(std::size_t total_n) : total_n_(total_n) {
  if (total_n > kRotationCeiling) {
    throw SizeExceeded("rotation block N = " + std::to_string(total_n) + " exceeds ceiling " +
                       std::to_string(kRotationCeiling));
  }
  const auto n = static_cast<Eigen::Index>(dim());
  eigenvalues_.resize(dim());
  eigenvectors_.assign(dim() * dim(), 0.0);
  if (total_n == 0) {
    eigenvalues_[0] = 0.0;
    eigenvectors_[0] = 1.0;
    return;
  }
  // J_x in the same basis: symmetric tridiagonal with the generator couplings.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    sub[k] = generator_coupling(total_n, static_cast<std::size_t>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const double half_n = 0.5 * static_cast<double>(total_n);
  for (Eigen::Index m = 0; m < n; ++m) {
    // Spectrum is exactly {-J, ..., J}; ascending order from the solver.
    eigenvalues_[static_cast<std::size_t>(m)] = static_cast<double>(m) - half_n;
    for (Eigen::Index k = 0; k < n; ++k) {
      eigenvectors_[static_cast<std::size_t>(m * n + k)] = v(k, m);
    }
  }
}

RotationBlock YRotation::block(double phi) const {
  RotationBlock out;
  out.total_n = total_n_;
  out.phi = phi;
  const std::size_t n = dim();
  out.d.assign(n * n, 0.0);
  if (phi == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out.d[i * n + i] = 1.0;
    return out;
  }
  std::vector<double> cos_l(n);
  std::vector<double> sin_l(n);
  for (std::size_t m = 0; m < n; ++m) {
    cos_l[m] = std::cos(phi * eigenvalues_[m]);
    sin_l[m] = std::sin(phi * eigenvalues_[m]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      // d_jk = Re(i^{j-k} sum_m V_jm V_km e^{-i phi lambda_m})
      const bool even = ((j + k) % 2 == 0);
      double acc = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        const double vv = eigenvectors_[m * n + j] * eigenvectors_[m * n + k];
        acc += vv * (even ? cos_l[m] : sin_l[m]);
      }
      const std::ptrdiff_t diff = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(k);
      const int quadrant = static_cast<int>(((diff % 4) + 4) % 4);
      out.d[j * n + k] = (quadrant >= 2) ? -acc : acc;
    }
  }
  return out;
}

std::vector<cplx> YRotation::apply(std::span<const cplx> coeffs, double phi) const {
  const std::size_t n = dim();
  if (coeffs.size() != n) throw std::invalid_argument("coefficient length must be N + 1");
  if (phi == 0.0) return {coeffs.begin(), coeffs.end()};

  std::vector<cplx> w(n, {0.0, 0.0});
  for (std::size_t m = 0; m < n; ++m) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      if (coeffs[k] == cplx{}) continue;
      acc += eigenvectors_[m * n + k] * std::conj(i_pow(static_cast<std::ptrdiff_t>(k))) * coeffs[k];
    }
    w[m] = acc * std::polar(1.0, -phi * eigenvalues_[m]);
  }
  std::vector<cplx> z(n, {0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) acc += eigenvectors_[m * n + j] * w[m];
    z[j] = i_pow(static_cast<std::ptrdiff_t>(j)) * acc;
  }
  return z;
}

std::vector<double> YRotation::apply(std::span<const double> coeffs, double phi) const {
  std::vector<cplx> in(coeffs.begin(), coeffs.end());
  const auto z = apply(std::span<const cplx>(in), phi);
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = z[j].real();
  return out;
}

RotationBlock wigner_d_block(std::size_t total_n, double phi) {
  return YRotation(total_n).block(phi);
}

template <class T>
void apply_generator(std::span<const T> v, std::span<T> out) {
  const std::size_t n = v.size();
  const std::size_t total_n = n - 1;
  for (std::size_t k = 0; k < n; ++k) {
    T acc{};
    if (k > 0) acc += generator_coupling(total_n, k - 1) * v[k - 1];
    if (k + 1 < n) acc -= generator_coupling(total_n, k) * v[k + 1];
    out[k] = acc;
  }
}

template void apply_generator<double>(std::span<const double>, std::span<double>);
template void apply_generator<cplx>(std::span<const cplx>, std::span<cplx>);

std::vector<double> conditional_probabilities(const YRotation& rot, std::span<const double> coeffs,
                                              double phi) {
  auto z = rot.apply(coeffs, phi);
  for (auto& x : z) x *= x;
  return z;
}

std::vector<double> conditional_probabilities(const NPhotonState& state, double phi) {
  return conditional_probabilities(YRotation(state.total_n), state.coeffs, phi);
}

std::vector<double> probability_derivatives(const YRotation& rot, std::span<const double> coeffs,
                                            double phi) {
  const auto z = rot.apply(coeffs, phi);
  std::vector<double> gz(z.size());
  apply_generator<double>(z, gz);
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = 2.0 * z[j] * gz[j];
  return out;
}

std::vector<double> probability_derivatives(const NPhotonState& state, double phi) {
  return probability_derivatives(YRotation(state.total_n), state.coeffs, phi);
}

ComplexProbabilities complex_probabilities(const YRotation& rot, std::span<const cplx> coeffs,
                                           double phi) {
  const auto z = rot.apply(coeffs, phi);
  std::vector<cplx> gz(z.size());
  apply_generator<cplx>(z, gz);
  ComplexProbabilities out;
  out.probability.resize(z.size());
  out.derivative.resize(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    out.probability[j] = std::norm(z[j]);
    out.derivative[j] = 2.0 * (std::conj(z[j]) * gz[j]).real();
  }
  return out;
}

std::size_t effective_threshold(const AmplitudeTable& amps, Threshold n_res) {
  return n_res.resolve(2 * amps.cutoff);
}

OutcomeDistribution full_outcome_distribution(const AmplitudeTable& amps, Threshold n_res,
                                              double phi) {
  const std::size_t limit = effective_threshold(amps, n_res);
  if (limit > kRotationCeiling) {
    throw SizeExceeded("outcome distribution needs N up to " + std::to_string(limit) +
                       ", above the rotation ceiling " + std::to_string(kRotationCeiling));
  }
  OutcomeDistribution dist;
  dist.n_res = limit;
  dist.phi = phi;
  dist.outcomes.reserve((limit + 1) * (limit + 2) / 2);
  CompensatedSum detected;
  for (std::size_t n = 0; n <= limit; ++n) {
    std::vector<double> probs(n + 1, 0.0);
    const LogSigned log_g = log_generation_probability(amps, n);
    if (!log_g.is_zero()) {
      const NPhotonState state = postselect(amps, n);
      probs = conditional_probabilities(YRotation(n), state.coeffs, phi);
      for (auto& p : probs) p *= state.gen_prob;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      dist.outcomes.push_back(Outcome{n, n - k, k, probs[k]});
      detected.add(probs[k]);
    }
  }
  dist.overflow = std::max(0.0, 1.0 - detected.value());
  return dist;
}

}  // namespace pnrmzi
