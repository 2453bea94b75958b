#include "faithful/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "faithful/channels.hpp"
#include "faithful/rng.hpp"

namespace faithful {

namespace {

constexpr std::array<Pol, 6> kPols{Pol::H, Pol::V, Pol::D, Pol::A, Pol::R, Pol::L};

// Eigenvalue sign of each label under its Pauli operator.
double sign_of(Pol p) { return (p == Pol::H || p == Pol::D || p == Pol::R) ? 1.0 : -1.0; }

// Index of the four records sharing a basis pair: [(+,+), (+,-), (-,+), (-,-)].
std::array<std::size_t, 4> basis_pair_indices(int pa, int pb) {
  static constexpr std::array<std::array<Pol, 2>, 3> eig{{{Pol::D, Pol::A}, {Pol::R, Pol::L}, {Pol::H, Pol::V}}};
  std::array<std::size_t, 4> out{};
  std::size_t k = 0;
  for (Pol a : eig[pa])
    for (Pol b : eig[pb]) out[k++] = setting_index({a, b});
  return out;
}

// ---- G parameterisation: 4 real diagonal entries, 6 complex sub-diagonal ----

constexpr std::size_t kParams = 16;
using Params = std::array<double, kParams>;

CMat4 unpack(const Params& x) {
  CMat4 g;
  std::size_t k = 4;
  for (std::size_t i = 0; i < 4; ++i) {
    g(i, i) = x[i];
    for (std::size_t j = 0; j < i; ++j, k += 2) g(i, j) = cplx(x[k], x[k + 1]);
  }
  return g;
}

Params pack(const CMat4& g) {
  Params x{};
  std::size_t k = 4;
  for (std::size_t i = 0; i < 4; ++i) {
    x[i] = g(i, i).real();
    for (std::size_t j = 0; j < i; ++j, k += 2) {
      x[k] = g(i, j).real();
      x[k + 1] = g(i, j).imag();
    }
  }
  return x;
}

double dot(const Params& a, const Params& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < kParams; ++i) s += a[i] * b[i];
  return s;
}

double pnorm(const Params& a) { return std::sqrt(dot(a, a)); }

// Lower-triangular G with G^dagger G = rho for a positive definite rho:
// Cholesky of the index-reversed matrix.
CMat4 reverse_cholesky_factor(const CMat4& rho) {
  CMat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = rho(3 - i, 3 - j);
  CMat4 l;
  for (std::size_t j = 0; j < 4; ++j) {
    cplx d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * std::conj(l(j, k));
    if (!(d.real() > 0.0)) throw NumericalError("reverse_cholesky_factor: matrix is not positive definite");
    const double ljj = std::sqrt(d.real());
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < 4; ++i) {
      cplx s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  // rho = U U^dagger with U = J L J upper triangular, so G = U^dagger.
  CMat4 u;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) u(i, j) = l(3 - i, 3 - j);
  return u.adjoint();
}

// Negative normalised log-likelihood and its gradient over the parameters.
class Objective {
 public:
  Objective(const std::vector<CountRecord>& records, const std::optional<CountModel>& model)
      : records_(records), model_(model) {
    for (std::size_t i = 0; i < 36; ++i) vectors_[i] = records[i].setting.vector();
    for (const auto& r : records) total_ += static_cast<double>(r.coincidences);
    if (!(total_ > 0.0)) throw std::invalid_argument("mle_reconstruct: no coincidences recorded");
  }

  double total() const { return total_; }

  // Returns +inf where the likelihood vanishes.
  double value(const Params& x, Params* grad) const {
    const CMat4 g = unpack(x);
    double norm2 = 0.0;
    for (const auto& z : g.data) norm2 += std::norm(z);
    if (!(norm2 > 0.0)) return std::numeric_limits<double>::infinity();

    std::array<double, 36> p{};
    for (std::size_t i = 0; i < 36; ++i) {
      double s = 0.0;
      for (std::size_t r = 0; r < 4; ++r) {
        cplx gv = 0.0;
        for (std::size_t c = 0; c <= r; ++c) gv += g(r, c) * vectors_[i][c];
        s += std::norm(gv);
      }
      p[i] = s / norm2;
    }

    std::array<double, 36> w{};
    double ll = 0.0;
    if (model_) {
      for (std::size_t i = 0; i < 36; ++i) {
        const double gates = static_cast<double>(records_[i].gates);
        const double k = static_cast<double>(records_[i].coincidences);
        const double mu = gates * (model_->signal * p[i] + model_->background);
        if (k > 0.0) {
          if (!(mu > 0.0)) return std::numeric_limits<double>::infinity();
          ll += k * std::log(mu);
          w[i] = gates * model_->signal * (k / mu - 1.0);
        } else {
          w[i] = -gates * model_->signal;
        }
        ll -= mu;
      }
    } else {
      double weighted = 0.0;
      for (std::size_t i = 0; i < 36; ++i) weighted += static_cast<double>(records_[i].gates) * p[i];
      for (std::size_t i = 0; i < 36; ++i) {
        const double k = static_cast<double>(records_[i].coincidences);
        const double gates = static_cast<double>(records_[i].gates);
        if (k > 0.0) {
          if (!(p[i] > 0.0)) return std::numeric_limits<double>::infinity();
          ll += k * std::log(p[i]);
          w[i] = k / p[i];
        }
        w[i] -= total_ * gates / weighted;
      }
      ll -= total_ * std::log(weighted);
    }

    if (grad) {
      // dL/dG* = G M / N with M = sum_i w_i (|v_i><v_i| - p_i 1).
      CMat4 m;
      for (std::size_t i = 0; i < 36; ++i) {
        m += w[i] * outer(vectors_[i], vectors_[i]);
        for (std::size_t d = 0; d < 4; ++d) m(d, d) -= w[i] * p[i];
      }
      const CMat4 dg = (1.0 / norm2) * (g * m);
      std::size_t k = 4;
      for (std::size_t i = 0; i < 4; ++i) {
        (*grad)[i] = -2.0 * dg(i, i).real() / total_;
        for (std::size_t j = 0; j < i; ++j, k += 2) {
          (*grad)[k] = -2.0 * dg(i, j).real() / total_;
          (*grad)[k + 1] = -2.0 * dg(i, j).imag() / total_;
        }
      }
    }
    return -ll / total_;
  }

 private:
  const std::vector<CountRecord>& records_;
  std::optional<CountModel> model_;
  std::array<CVec4, 36> vectors_{};
  double total_ = 0.0;
};

DensityMatrix state_of(const Params& x) {
  const CMat4 g = unpack(x);
  CMat4 rho = g.adjoint() * g;
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

CMat2 hv_rotation() {
  CMat2 u;
  u(0, 1) = -1.0;
  u(1, 0) = 1.0;
  return u;
}

}  // namespace

const char* to_string(MleStatus s) {
  switch (s) {
    case MleStatus::Converged: return "converged";
    case MleStatus::IterationCap: return "iteration-cap";
    case MleStatus::Stalled: return "stalled";
  }
  return "unknown";
}

char pol_label(Pol p) {
  static constexpr char labels[] = {'H', 'V', 'D', 'A', 'R', 'L'};
  return labels[static_cast<int>(p)];
}

Pol pol_from_label(char c) {
  for (Pol p : kPols)
    if (pol_label(p) == c) return p;
  throw std::invalid_argument(std::string("unknown polarisation label '") + c + "'");
}

CVec2 pol_vector(Pol p) {
  const double h = std::numbers::sqrt2 / 2.0;
  switch (p) {
    case Pol::H: return {1.0, 0.0};
    case Pol::V: return {0.0, 1.0};
    case Pol::D: return {h, h};
    case Pol::A: return {h, -h};
    case Pol::R: return {h, cplx(0.0, h)};
    case Pol::L: return {h, cplx(0.0, -h)};
  }
  return {1.0, 0.0};
}

CVec4 MeasurementSetting::vector() const {
  const CVec2 va = pol_vector(a), vb = pol_vector(b);
  return {va[0] * vb[0], va[0] * vb[1], va[1] * vb[0], va[1] * vb[1]};
}

std::string MeasurementSetting::label() const { return {pol_label(a), pol_label(b)}; }

const std::array<MeasurementSetting, 36>& all_settings() {
  static const std::array<MeasurementSetting, 36> settings = [] {
    std::array<MeasurementSetting, 36> s{};
    std::size_t k = 0;
    for (Pol a : kPols)
      for (Pol b : kPols) s[k++] = {a, b};
    return s;
  }();
  return settings;
}

std::size_t setting_index(const MeasurementSetting& s) {
  return 6 * static_cast<std::size_t>(s.a) + static_cast<std::size_t>(s.b);
}

void TomoConfig::validate() const {
  if (!(pair_rate > 0.0 && pair_rate < 0.2)) throw std::invalid_argument("pair_rate must lie in (0, 0.2)");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw std::invalid_argument("efficiency must lie in (0, 1]");
  if (!(dark_prob >= 0.0 && std::isfinite(dark_prob))) throw std::invalid_argument("dark_prob must be >= 0");
  if (gates < 1) throw std::invalid_argument("gates must be >= 1");
}

double TomoConfig::signal_per_gate() const { return pair_rate * efficiency * efficiency; }

double TomoConfig::accidental_per_gate() const { return 2.0 * dark_prob * (pair_rate * efficiency + dark_prob); }

std::array<double, 36> expected_means(const DensityMatrix& rho, const CountModel& model, std::uint64_t gates) {
  std::array<double, 36> out{};
  const auto& settings = all_settings();
  for (std::size_t i = 0; i < 36; ++i) {
    const double p = std::max(0.0, rho.expectation(settings[i].vector()));
    out[i] = static_cast<double>(gates) * (model.signal * p + model.background);
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, const CountModel& model, std::uint64_t gates,
                                         std::uint64_t seed, Sampling sampling) {
  const auto means = expected_means(rho, model, gates);
  Rng rng(seed);
  std::vector<CountRecord> out;
  out.reserve(36);
  for (std::size_t i = 0; i < 36; ++i) {
    std::uint64_t k = 0;
    if (sampling == Sampling::ExactMeans) {
      k = static_cast<std::uint64_t>(std::llround(means[i]));
    } else if (means[i] > 0.0) {
      std::poisson_distribution<std::uint64_t> dist(means[i]);
      k = dist(rng);
    }
    out.push_back({all_settings()[i], gates, std::min(k, gates)});
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, const TomoConfig& cfg, Sampling sampling) {
  cfg.validate();
  return simulate_counts(rho, CountModel::from(cfg), cfg.gates, cfg.seed, sampling);
}

std::vector<CountRecord> canonical_records(const std::vector<CountRecord>& records) {
  std::array<std::optional<CountRecord>, 36> slots;
  for (const auto& r : records) {
    const std::size_t i = setting_index(r.setting);
    if (slots[i]) throw std::invalid_argument("duplicate measurement setting " + r.setting.label());
    if (r.gates == 0) throw std::invalid_argument("setting " + r.setting.label() + " has zero gates");
    if (r.coincidences > r.gates)
      throw std::invalid_argument("setting " + r.setting.label() + " has more coincidences than gates");
    slots[i] = r;
  }
  std::vector<CountRecord> out;
  out.reserve(36);
  for (std::size_t i = 0; i < 36; ++i) {
    if (!slots[i]) throw std::invalid_argument("missing measurement setting " + all_settings()[i].label());
    out.push_back(*slots[i]);
  }
  return out;
}

PauliRep linear_inversion(const std::vector<CountRecord>& records, const std::optional<CountModel>& model) {
  const auto rec = canonical_records(records);
  PauliRep out;
  Vec3 r_sum{}, s_sum{};
  for (int pa = 0; pa < 3; ++pa)
    for (int pb = 0; pb < 3; ++pb) {
      const auto idx = basis_pair_indices(pa, pb);
      std::array<double, 4> rate{};
      double total = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        const auto& r = rec[idx[k]];
        const double g = static_cast<double>(r.gates);
        double v = static_cast<double>(r.coincidences) / g;
        if (model) v = std::max(0.0, v - model->background);
        rate[k] = v;
        total += v;
      }
      if (!(total > 0.0)) {
        std::ostringstream os;
        os << "linear_inversion: zero total counts in basis pair " << rec[idx[0]].setting.label() << "/"
           << rec[idx[3]].setting.label();
        throw std::invalid_argument(os.str());
      }
      double corr = 0.0, ea = 0.0, eb = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double sa = sign_of(rec[idx[k]].setting.a), sb = sign_of(rec[idx[k]].setting.b);
        corr += sa * sb * rate[k];
        ea += sa * rate[k];
        eb += sb * rate[k];
      }
      out.t(static_cast<std::size_t>(pa), static_cast<std::size_t>(pb)) = corr / total;
      r_sum[static_cast<std::size_t>(pa)] += ea / total;
      s_sum[static_cast<std::size_t>(pb)] += eb / total;
    }
  for (std::size_t i = 0; i < 3; ++i) {
    out.r[i] = r_sum[i] / 3.0;
    out.s[i] = s_sum[i] / 3.0;
  }
  return out;
}

DensityMatrix project_to_state(const CMat4& m) {
  const EigenSpectrum spec = herm_eigen(0.5 * (m + m.adjoint()));
  CMat4 out;
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double p = std::max(0.0, spec.eigenvalues[k]);
    out += p * outer(spec.eigenvectors[k], spec.eigenvectors[k]);
    total += p;
  }
  if (!(total > 0.0)) throw NumericalError("project_to_state: no positive eigenvalue");
  out *= 1.0 / total;
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

double log_likelihood(const DensityMatrix& rho, const std::vector<CountRecord>& records, const CountModel& model) {
  double ll = 0.0;
  for (const auto& r : records) {
    const double p = std::max(0.0, rho.expectation(r.setting.vector()));
    const double mu = static_cast<double>(r.gates) * (model.signal * p + model.background);
    const double k = static_cast<double>(r.coincidences);
    if (k > 0.0) {
      if (!(mu > 0.0)) return -std::numeric_limits<double>::infinity();
      ll += k * std::log(mu);
    }
    ll -= mu;
  }
  return ll;
}

MleResult mle_reconstruct(const std::vector<CountRecord>& records_in, const std::optional<CountModel>& model,
                          const MleOptions& opts) {
  const auto records = canonical_records(records_in);
  if (model && !(model->signal > 0.0 && model->background >= 0.0))
    throw std::invalid_argument("mle_reconstruct: count model needs signal > 0 and background >= 0");
  const Objective objective(records, model);

  // Start from the projected linear estimate, mixed slightly towards I/4 so
  // the factor is well defined. Sparse data with an empty basis pair starts
  // from I/4.
  CMat4 start = 0.25 * CMat4::identity();
  try {
    const DensityMatrix lin = project_to_state(pauli_matrix(linear_inversion(records, model)));
    start = 0.95 * lin.matrix() + 0.0125 * CMat4::identity();
  } catch (const std::invalid_argument&) {
  }
  Params x = pack(reverse_cholesky_factor(start));

  Params g{};
  double f = objective.value(x, &g);
  if (!std::isfinite(f)) {
    x = pack(reverse_cholesky_factor(0.25 * CMat4::identity()));
    f = objective.value(x, &g);
  }

  // L-BFGS with Armijo backtracking; only descent steps are accepted, so the
  // likelihood is monotone.
  constexpr std::size_t kMemory = 8;
  std::deque<std::pair<Params, Params>> memory;  // (s, y)
  MleResult out{DensityMatrix{}, MleStatus::IterationCap, 0, 0.0, 0.0, {}, true};
  int it = 0;
  bool stalled = false;
  for (; it < opts.max_iterations; ++it) {
    if (pnorm(g) <= opts.gradient_tol) break;

    // Two-loop recursion for d = -H g.
    Params q = g;
    std::vector<double> alpha(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      alpha[m] = dot(s, q) / dot(y, s);
      for (std::size_t i = 0; i < kParams; ++i) q[i] -= alpha[m] * y[i];
    }
    double gamma = 1.0;
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      gamma = dot(s, y) / dot(y, y);
    } else {
      gamma = 0.1 / std::max(pnorm(g), 1e-300);
    }
    for (auto& v : q) v *= gamma;
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double beta = dot(y, q) / dot(y, s);
      for (std::size_t i = 0; i < kParams; ++i) q[i] += s[i] * (alpha[m] - beta);
    }
    Params d{};
    for (std::size_t i = 0; i < kParams; ++i) d[i] = -q[i];
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      for (std::size_t i = 0; i < kParams; ++i) d[i] = -g[i] * 0.1 / pnorm(g);
      slope = dot(g, d);
    }

    double step = 1.0;
    Params xn{}, gn{};
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      for (std::size_t i = 0; i < kParams; ++i) xn[i] = x[i] + step * d[i];
      fn = objective.value(xn, &gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope && fn <= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (memory.empty()) {
        stalled = true;
        break;
      }
      memory.clear();
      continue;
    }
    if (fn > f) out.likelihood_monotone = false;

    Params s{}, y{};
    for (std::size_t i = 0; i < kParams; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    if (dot(s, y) > 1e-16 * pnorm(s) * pnorm(y)) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    x = xn;
    g = gn;
    f = fn;

    // The objective is invariant under scaling of G; keep |G| near 1.
    const double scale = pnorm(x);
    if (scale > 2.0 || scale < 0.5) {
      for (auto& v : x) v /= scale;
      f = objective.value(x, &g);
      memory.clear();
    }
  }

  out.iterations = it;
  out.gradient_norm = pnorm(g);
  if (out.gradient_norm <= opts.gradient_tol)
    out.status = MleStatus::Converged;
  else
    out.status = stalled ? MleStatus::Stalled : MleStatus::IterationCap;
  DensityMatrix rho = state_of(x);

  if (model) {
    out.model = *model;
  } else {
    double weighted = 0.0;
    for (const auto& r : records) weighted += static_cast<double>(r.gates) * rho.expectation(r.setting.vector());
    out.model = {objective.total() / weighted, 0.0};
  }
  out.log_likelihood = log_likelihood(rho, records, out.model);
  if (opts.rotate_hv) rho = local_rotate(rho, hv_rotation(), hv_rotation());
  out.rho = rho;
  return out;
}

ErrorBars metrics_with_errorbars(const std::vector<CountRecord>& records_in, const std::optional<CountModel>& model,
                                 int resamples, std::uint64_t seed, Exec exec, const MleOptions& opts) {
  if (resamples < 50) throw std::invalid_argument("metrics_with_errorbars: resamples must be >= 50");
  const auto records = canonical_records(records_in);
  MleOptions unrotated = opts;
  unrotated.rotate_hv = false;
  const MleResult fit = mle_reconstruct(records, model, unrotated);

  struct Sample {
    double c = 0.0, f = 0.0;
    bool converged = true;
  };
  const auto samples = map_indexed<Sample>(
      static_cast<std::size_t>(resamples),
      [&](std::size_t i) {
        const auto means = expected_means(fit.rho, fit.model, 1);
        Rng rng(derive_seed(seed, i));
        std::vector<CountRecord> sim;
        sim.reserve(36);
        for (std::size_t k = 0; k < 36; ++k) {
          const double mean = means[k] * static_cast<double>(records[k].gates);
          std::uint64_t n = 0;
          if (mean > 0.0) {
            std::poisson_distribution<std::uint64_t> dist(mean);
            n = dist(rng);
          }
          sim.push_back({records[k].setting, records[k].gates, std::min(n, records[k].gates)});
        }
        const MleResult r = mle_reconstruct(sim, model, opts);
        return Sample{concurrence(r.rho), fef_spectral(r.rho), r.status == MleStatus::Converged};
      },
      exec);

  ErrorBars out;
  DensityMatrix point = fit.rho;
  if (opts.rotate_hv) point = local_rotate(point, hv_rotation(), hv_rotation());
  AnalyzeOptions no_witness;
  no_witness.with_witness = false;
  out.point = analyze(point, no_witness);
  out.resamples = resamples;
  for (const auto& s : samples) {
    out.concurrence_mean += s.c;
    out.fef_mean += s.f;
    out.nonconverged += s.converged ? 0 : 1;
  }
  const double n = static_cast<double>(resamples);
  out.concurrence_mean /= n;
  out.fef_mean /= n;
  for (const auto& s : samples) {
    out.concurrence_std += (s.c - out.concurrence_mean) * (s.c - out.concurrence_mean);
    out.fef_std += (s.f - out.fef_mean) * (s.f - out.fef_mean);
  }
  out.concurrence_std = std::sqrt(out.concurrence_std / (n - 1.0));
  out.fef_std = std::sqrt(out.fef_std / (n - 1.0));
  return out;
}

}  // namespace faithful
