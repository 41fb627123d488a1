// Copyright 2025 dressedqed contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include <json.hpp>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>
#include <unsupported/Eigen/NonLinearOptimization>

#include "dqed/errors.hpp"

namespace dqed {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Problem {
  int dim = 0;
  Matrix h0;       // lab-frame static Hamiltonian, GHz
  Matrix drive;    // multiplies cos(2 pi f_d t)
  Matrix phi;      // observable
  Matrix ldiss;    // dissipator superoperator, 1/ns
  std::vector<int> excitations;
  double f_d = 0.0;
  bool rotating = false;
  bool is_static = false;
  double f_max = 0.0;
  double band = 0.0;
  Matrix rho0;
};

Matrix dissipator(const Matrix& c) {
  const Eigen::Index d = c.rows();
  Matrix id = Matrix::Identity(d, d);
  Matrix cdc = c.adjoint() * c;
  // row-major vec: vec(A X B) = kron(A, B^T) vec(X)
  return 0.5 * (2.0 * kron(c, Matrix(c.conjugate())) - kron(cdc, id) - kron(id, Matrix(cdc.transpose())));
}

Matrix thermal(int dim, double nbar) {
  Matrix rho = Matrix::Zero(dim, dim);
  const double r = nbar / (1.0 + nbar);
  double z = 0.0;
  for (int n = 0; n < dim; ++n) z += std::pow(r, n);
  for (int n = 0; n < dim; ++n) rho(n, n) = std::pow(r, n) / z;
  return rho;
}

Problem build_problem(const DeviceParams& p, const DriveParams& d, const OracleConfig& cfg) {
  p.validate(true);
  cfg.validate(p.dim_q);
  const int dq = p.dim_q, dr = p.dim_r, dim = dq * dr;
  if (dim > 64) throw ConfigError("oracle needs dim_q * dim_r <= 64");

  BareTransmon bt = bare_transmon(p);
  if (cfg.harmonic_transmon) {
    Matrix b = ladder(dq).data();
    bt.energies = RVector::LinSpaced(dq, 0.0, (dq - 1) * harmonic_frequency(p));
    bt.b = b;
    bt.d = b - b.adjoint();
    bt.phi = b + b.adjoint();
  }
  Matrix idq = Matrix::Identity(dq, dq), idr = Matrix::Identity(dr, dr);
  Problem pr;
  pr.dim = dim;
  pr.f_d = d.omega_d;
  // without a drive the lab-frame generator is static, which allows exact propagators
  pr.rotating = cfg.rotating_frame && d.omega_amp != 0.0;
  pr.is_static = d.omega_amp == 0.0;

  Matrix eq = Matrix::Zero(dq, dq);
  for (int n = 0; n < dq; ++n) eq(n, n) = bt.energies(n);
  pr.h0 = kron(eq, idr);
  if (dr > 1) {
    Matrix a = ladder(dr, BasisKind::ResonatorFock).data();
    pr.h0 += p.omega_r * kron(idq, Matrix(a.adjoint() * a)) + p.g * kron(bt.d, Matrix(a - a.adjoint()));
  }
  pr.drive = d.zeta * d.omega_amp * kron(bt.phi, idr);
  pr.phi = kron(bt.phi, idr);
  pr.excitations.resize(dim);
  for (int nq = 0; nq < dq; ++nq)
    for (int nr = 0; nr < dr; ++nr) pr.excitations[nq * dr + nr] = nq + nr;

  pr.ldiss = Matrix::Zero(dim * dim, dim * dim);
  for (int n = 0; n + 1 < dq; ++n) {
    const double gamma = cfg.decay_rates.empty() ? (n + 1) * 2e-4 : cfg.decay_rates[n];
    const double gphi = cfg.dephasing_rates.empty() ? 1e-4 : cfg.dephasing_rates[n];
    Matrix c = Matrix::Zero(dq, dq);
    c(n, n + 1) = std::sqrt(kTwoPi * gamma);
    pr.ldiss += dissipator(kron(c, idr));
    Matrix z = Matrix::Zero(dq, dq);
    z(n + 1, n + 1) = 1.0;
    z(n, n) = -1.0;
    pr.ldiss += dissipator(kron(Matrix(std::sqrt(kTwoPi * gphi) * z), idr));
  }
  if (dr > 1) {
    Matrix a = ladder(dr, BasisKind::ResonatorFock).data();
    pr.ldiss += dissipator(kron(idq, Matrix(std::sqrt(kTwoPi * cfg.resonator_decay) * a)));
  }

  // Fastest frequency carried by the generator in the chosen frame.
  RVector diag(dim);
  for (int i = 0; i < dim; ++i)
    diag(i) = pr.h0(i, i).real() - (pr.rotating ? pr.excitations[i] * pr.f_d : 0.0);
  Matrix off = pr.h0;
  for (int i = 0; i < dim; ++i) off(i, i) = 0.0;
  const double scale = std::max(max_abs(off), max_abs(pr.drive));
  int max_dn = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (std::abs(off(i, j)) > 1e-6 * scale || std::abs(pr.drive(i, j)) > 1e-6 * scale)
        max_dn = std::max(max_dn, std::abs(pr.excitations[i] - pr.excitations[j]));
  auto spectral_norm = [](const Matrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(m)};
    return svd.singularValues()(0);
  };
  const double norm_off = spectral_norm(off);
  const double norm_drv = spectral_norm(pr.drive);
  pr.f_max = (diag.maxCoeff() - diag.minCoeff()) + norm_off + norm_drv +
             pr.f_d * (pr.rotating ? (1 + max_dn) : 1);

  const double e1 = bt.energies(1);
  pr.band = 1.5 * std::max({e1, std::abs(e1 - pr.f_d), 1.0});

  Matrix rq = thermal(dq, cfg.thermal_population);
  Matrix rr = dr > 1 ? thermal(dr, cfg.thermal_population) : Matrix::Identity(1, 1);
  pr.rho0 = kron(rq, rr);
  return pr;
}

// L(t) = -i 2pi [H(t), .] + dissipators, with H in the chosen frame.
void generator(const Problem& pr, double t, Matrix& l) {
  const int d = pr.dim;
  const double c = std::cos(kTwoPi * pr.f_d * t);
  Matrix h = pr.h0 + c * pr.drive;
  if (pr.rotating) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const int dn = pr.excitations[i] - pr.excitations[j];
        if (dn != 0) h(i, j) *= std::polar(1.0, kTwoPi * pr.f_d * t * dn);
      }
    for (int i = 0; i < d; ++i) h(i, i) -= pr.excitations[i] * pr.f_d;
  }
  l = pr.ldiss;
  const cplx mi(0.0, -kTwoPi);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Eigen::Index row = i * d + j;
      for (int k = 0; k < d; ++k) {
        l(row, k * d + j) += mi * h(i, k);
        l(row, i * d + k) -= mi * h(k, j);
      }
    }
}

struct Stepping {
  int samples = 0;    // per drive period
  int substeps = 0;   // RK4 steps per sample
  double dt = 0.0;
};

Stepping choose_stepping(const Problem& pr, const OracleConfig& cfg) {
  Stepping st;
  const double period = 1.0 / pr.f_d;
  st.samples = cfg.samples_per_period > 0 ? cfg.samples_per_period
                                          : std::max(1, static_cast<int>(std::ceil(2.0 * pr.band / pr.f_d)));
  const double sample = period / st.samples;
  const double dt_max = 1.0 / (64.0 * pr.f_max);
  if (cfg.dt > 0) {
    if (cfg.dt > dt_max * (1 + 1e-12))
      throw StabilityError("dt = " + std::to_string(cfg.dt) + " ns exceeds 1/(64 f_max) = " + std::to_string(dt_max));
    st.substeps = std::max(1, static_cast<int>(std::ceil(sample / cfg.dt - 1e-9)));
  } else {
    st.substeps = std::max(1, static_cast<int>(std::ceil(sample / dt_max)));
  }
  st.dt = sample / st.substeps;
  return st;
}

// Propagators over each sample interval of one drive period.
std::vector<Matrix> period_propagators(const Problem& pr, const Stepping& st) {
  const Eigen::Index n = static_cast<Eigen::Index>(pr.dim) * pr.dim;
  std::vector<Matrix> out;
  Matrix la(n, n), lb(n, n), lc(n, n);
  double t = 0.0;
  generator(pr, t, la);
  const double h = st.dt;
  if (pr.is_static) {
    Matrix step = Matrix((la * cplx(h * st.substeps)).exp());
    return std::vector<Matrix>(st.samples, step);
  }
  for (int s = 0; s < st.samples; ++s) {
    Matrix prop = Matrix::Identity(n, n);
    for (int k = 0; k < st.substeps; ++k) {
      generator(pr, t + 0.5 * h, lb);
      generator(pr, t + h, lc);
      Matrix k1 = la * prop;
      Matrix k2 = lb * (prop + 0.5 * h * k1);
      Matrix k3 = lb * (prop + 0.5 * h * k2);
      Matrix k4 = lc * (prop + h * k3);
      prop += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
      std::swap(la, lc);
    }
    out.push_back(std::move(prop));
  }
  return out;
}

Eigen::VectorXcd vec(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

void OracleConfig::validate(int dim_q) const {
  if (!(t_total > 0)) throw ConfigError("t_total must be positive");
  if (dt < 0) throw ConfigError("dt must be non-negative");
  if (thermal_population < 0) throw ConfigError("thermal_population must be non-negative");
  if (!decay_rates.empty() && static_cast<int>(decay_rates.size()) < dim_q - 1)
    throw ConfigError("decay_rates needs one entry per transition");
  if (!dephasing_rates.empty() && static_cast<int>(dephasing_rates.size()) < dim_q - 1)
    throw ConfigError("dephasing_rates needs one entry per transition");
  for (double r : decay_rates)
    if (!(r > 0)) throw ConfigError("decay rates must be positive");
  for (double r : dephasing_rates)
    if (!(r > 0)) throw ConfigError("dephasing rates must be positive");
  if (!(resonator_decay > 0)) throw ConfigError("resonator_decay must be positive");
}

SpectrumResult absorption_spectrum(const DeviceParams& p, const DriveParams& d, const OracleConfig& cfg) {
  Problem pr = build_problem(p, d, cfg);
  Stepping st = choose_stepping(pr, cfg);
  std::vector<Matrix> props = period_propagators(pr, st);

  const double period = 1.0 / pr.f_d;
  const long periods = static_cast<long>(std::ceil(cfg.t_total / period - 1e-9));
  const long count = periods * st.samples;
  const double ts = period / st.samples;

  // quantum regression: X(0) = phi rho0, C(t) = Tr(phi X(t))
  Eigen::VectorXcd x = vec(Matrix(pr.phi * pr.rho0));
  Eigen::VectorXcd phit = vec(Matrix(pr.phi.transpose()));
  std::vector<cplx> corr(static_cast<size_t>(count));
  for (long k = 0; k < count; ++k) {
    corr[k] = phit.cwiseProduct(x).sum();
    x = props[k % st.samples] * x;
  }
  if (cfg.window == Window::Hann && count > 1)
    for (long k = 0; k < count; ++k)
      corr[k] *= 0.5 * (1.0 - std::cos(kTwoPi * k / static_cast<double>(count - 1)));

  size_t nfft = 1;
  while (nfft < 2 * static_cast<size_t>(count)) nfft <<= 1;
  corr.resize(nfft, cplx(0.0, 0.0));
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, corr);

  // e^{+i w t} convention: frequency f sits at fft bin -f
  const double shift = pr.rotating ? pr.f_d : 0.0;
  const double df = 1.0 / (nfft * ts);
  SpectrumResult out;
  out.freqs.resize(nfft);
  out.power.resize(nfft);
  const long half = static_cast<long>(nfft / 2);
  for (long i = 0; i < static_cast<long>(nfft); ++i) {
    const long kf = i - half;  // output frequency index
    const long bin = ((-kf) % static_cast<long>(nfft) + static_cast<long>(nfft)) % static_cast<long>(nfft);
    out.freqs[i] = kf * df + shift;
    out.power[i] = std::abs(spec[bin]);
  }
  const double pmax = *std::max_element(out.power.begin(), out.power.end());
  if (pmax > 0)
    for (double& v : out.power) v /= pmax;
  out.resolution = 1.0 / (count * ts);
  out.dt = st.dt;
  out.samples_per_period = st.samples;

  int maxima = 0;
  for (size_t i = 1; i + 1 < out.power.size(); ++i)
    if (out.power[i] > out.power[i - 1] && out.power[i] >= out.power[i + 1] && out.power[i] > 0.05) ++maxima;
  const int n_fit = std::min(3, std::max(1, maxima));
  try {
    out.peaks = fit_lorentzians(out, n_fit);
  } catch (const Error&) {
    out.peaks = fit_lorentzians(out, 1);
  }
  return out;
}

double trace_drift(const DeviceParams& p, const DriveParams& d, const OracleConfig& cfg) {
  Problem pr = build_problem(p, d, cfg);
  Stepping st = choose_stepping(pr, cfg);
  std::vector<Matrix> props = period_propagators(pr, st);
  const double period = 1.0 / pr.f_d;
  const long count = static_cast<long>(std::ceil(cfg.t_total / period - 1e-9)) * st.samples;
  Eigen::VectorXcd x = vec(pr.rho0);
  double worst = 0.0;
  for (long k = 0; k < count; ++k) {
    x = props[k % st.samples] * x;
    cplx tr = 0.0;
    for (int i = 0; i < pr.dim; ++i) tr += x(i * pr.dim + i);
    worst = std::max(worst, std::abs(tr - 1.0));
  }
  return worst;
}

namespace {

struct LorentzFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  Eigen::VectorXd x, y;
  int peaks = 0;

  int inputs() const { return 3 * peaks; }
  int values() const { return static_cast<int>(x.size()); }

  // parameters per peak: center, half width, amplitude
  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    f = -y;
    for (int k = 0; k < peaks; ++k) {
      const double c = p(3 * k), h = p(3 * k + 1), a = p(3 * k + 2);
      f.array() += a * h * h / ((x.array() - c).square() + h * h);
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
    j.resize(values(), inputs());
    for (int k = 0; k < peaks; ++k) {
      const double c = p(3 * k), h = p(3 * k + 1), a = p(3 * k + 2);
      Eigen::ArrayXd u = x.array() - c;
      Eigen::ArrayXd den = u.square() + h * h;
      j.col(3 * k) = (2.0 * a * h * h * u / den.square()).matrix();
      j.col(3 * k + 1) = (2.0 * a * h * u.square() / den.square()).matrix();
      j.col(3 * k + 2) = (h * h / den).matrix();
    }
    return 0;
  }
};

}  // namespace

std::vector<Peak> fit_lorentzians(const SpectrumResult& s, int n_peaks) {
  if (n_peaks < 1) throw ConfigError("n_peaks must be >= 1");
  const size_t n = s.freqs.size();
  if (n < static_cast<size_t>(8 * n_peaks) || s.power.size() != n)
    throw InsufficientDataError("spectrum too short for the requested number of peaks");

  std::vector<size_t> maxima;
  for (size_t i = 1; i + 1 < n; ++i)
    if (s.power[i] > s.power[i - 1] && s.power[i] >= s.power[i + 1]) maxima.push_back(i);
  if (static_cast<int>(maxima.size()) < n_peaks)
    throw FitSeedError("found " + std::to_string(maxima.size()) + " local maxima, need " + std::to_string(n_peaks));
  std::stable_sort(maxima.begin(), maxima.end(), [&](size_t a, size_t b) { return s.power[a] > s.power[b]; });
  maxima.resize(n_peaks);

  const double step = s.freqs[1] - s.freqs[0];
  const double origin = s.freqs[maxima[0]];

  // half-width estimates and the fit window, in grid units
  std::vector<char> use(n, 0);
  Eigen::VectorXd p0(3 * n_peaks);
  for (int k = 0; k < n_peaks; ++k) {
    const size_t i = maxima[k];
    const double half = 0.5 * s.power[i];
    size_t lo = i, hi = i;
    while (lo > 0 && s.power[lo] > half) --lo;
    while (hi + 1 < n && s.power[hi] > half) ++hi;
    double hw = 0.5 * static_cast<double>(hi - lo);
    if (i > 0 && i + 1 < n) {
      // curvature at the top, y'' = -2y/h^2, is not inflated by neighbouring peaks
      const double curv = s.power[i - 1] - 2.0 * s.power[i] + s.power[i + 1];
      if (curv < 0.0) hw = std::min(hw, std::sqrt(-2.0 * s.power[i] / curv));
    }
    hw = std::max(0.5, hw);
    const long reach = static_cast<long>(std::ceil(std::max(10.0, 6.0 * hw)));
    for (long j = static_cast<long>(i) - reach; j <= static_cast<long>(i) + reach; ++j)
      if (j >= 0 && j < static_cast<long>(n)) use[j] = 1;
    p0(3 * k) = (s.freqs[i] - origin) / step;
    p0(3 * k + 1) = hw;
    p0(3 * k + 2) = s.power[i];
  }
  std::vector<size_t> idx;
  for (size_t i = 0; i < n; ++i)
    if (use[i]) idx.push_back(i);

  LorentzFunctor fn;
  fn.peaks = n_peaks;
  fn.x.resize(static_cast<Eigen::Index>(idx.size()));
  fn.y.resize(static_cast<Eigen::Index>(idx.size()));
  for (size_t m = 0; m < idx.size(); ++m) {
    fn.x(m) = (s.freqs[idx[m]] - origin) / step;
    fn.y(m) = s.power[idx[m]];
  }
  if (fn.values() < fn.inputs()) throw InsufficientDataError("fit window smaller than the parameter count");

  Eigen::LevenbergMarquardt<LorentzFunctor> lm(fn);
  lm.parameters.maxfev = 4000;
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  Eigen::VectorXd p = p0;
  lm.minimize(p);
  if (!p.allFinite()) throw SolverError("Lorentzian fit diverged");

  std::vector<Peak> out;
  for (int k = 0; k < n_peaks; ++k) {
    Peak pk;
    pk.center = origin + p(3 * k) * step;
    pk.width = 2.0 * std::abs(p(3 * k + 1)) * step;
    pk.amplitude = p(3 * k + 2);
    out.push_back(pk);
  }
  std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.center < b.center; });
  return out;
}

Peak main_peak(const SpectrumResult& s) {
  const Peak* best = nullptr;
  for (const Peak& pk : s.peaks)
    if (pk.center > 0 && (!best || pk.amplitude > best->amplitude)) best = &pk;
  if (!best) throw FitSeedError("no positive-frequency peak in spectrum");
  return *best;
}

void write_spectrum(const std::string& path, const SpectrumResult& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(12);
  out << "freq_ghz,power\n";
  for (size_t i = 0; i < s.freqs.size(); ++i) out << s.freqs[i] << ',' << s.power[i] << '\n';
  nlohmann::json j;
  j["resolution_ghz"] = s.resolution;
  j["dt_ns"] = s.dt;
  j["samples_per_period"] = s.samples_per_period;
  j["peaks"] = nlohmann::json::array();
  for (const Peak& pk : s.peaks)
    j["peaks"].push_back({{"center_ghz", pk.center}, {"width_ghz", pk.width}, {"amplitude", pk.amplitude}});
  std::ofstream side(path + ".peaks.json");
  if (!side) throw IoError("cannot write " + path + ".peaks.json");
  side << j.dump(2) << '\n';
}

}  // namespace dqed
