#include "pntomo/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "pntomo/detail/closed_forms.hpp"
#include "pntomo/errors.hpp"

namespace pntomo {

namespace {

using LD = long double;
using CLD = std::complex<LD>;
using CMatLD = detail::CMat<LD>;

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "efficiency eta = " << eta << " outside (0, 1]";
    throw ValidationError(os.str());
  }
}

// P(0..rows-1) of D(alpha) rho D^dag(alpha) in extended precision.
std::vector<LD> displaced_populations(const CMatLD& rho, CLD alpha, int rows) {
  const int dim = static_cast<int>(rho.rows());
  const CMatLD d = detail::displacement_block<LD>(alpha, rows, dim);
  const CMatLD d_rho = d * rho;
  std::vector<LD> p(static_cast<std::size_t>(rows));
  for (int n = 0; n < rows; ++n) {
    LD acc = 0;
    for (int k = 0; k < dim; ++k) acc += std::real(d_rho(n, k) * std::conj(d(n, k)));
    p[n] = std::max(acc, LD(0));
  }
  return p;
}

std::vector<LD> smear(const std::vector<LD>& p, LD eta) {
  const int len = static_cast<int>(p.size());
  if (eta == LD(1)) return p;
  std::vector<LD> out(p.size(), LD(0));
  const LD log_eta = std::log(eta);
  const LD log_loss = std::log1p(-eta);
  for (int n = 0; n < len; ++n) {
    if (p[n] == LD(0)) continue;
    const LD lf_n = detail::log_factorial<LD>(n);
    for (int m = 0; m <= n; ++m) {
      const LD log_b = lf_n - detail::log_factorial<LD>(m) - detail::log_factorial<LD>(n - m) +
                       m * log_eta + (n - m) * log_loss;
      out[m] += std::exp(log_b) * p[n];
    }
  }
  return out;
}

// Photon cutoff beyond which D(alpha) rho D^dag(alpha) has no appreciable
// population: (sqrt(dim) + |alpha|)^2 plus a generous Poisson-width margin.
int populated_cutoff(int dim, double alpha_abs) {
  const double reach = std::sqrt(static_cast<double>(dim)) + alpha_abs;
  return static_cast<int>(std::ceil(reach * reach + 10.0 * reach + 10.0));
}

CMatLD to_ld(const CMatrix& m) { return m.cast<CLD>(); }

}  // namespace

ProbabilityVector displaced_number_probabilities(const DensityMatrix& rho, Complex alpha, int n_max) {
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  const auto p = displaced_populations(to_ld(rho.matrix()), CLD(alpha), n_max + 1);
  ProbabilityVector out;
  out.p.assign(p.begin(), p.end());
  LD total = 0;
  for (LD v : p) total += v;
  out.tail_mass = static_cast<double>(LD(1) - total);
  if (out.tail_mass > kTailWarning) {
    std::ostringstream os;
    os << "tail mass " << out.tail_mass << " beyond n_max = " << n_max << " at alpha = " << alpha;
    out.warnings.push_back(os.str());
  }
  return out;
}

std::vector<double> apply_efficiency(std::span<const double> p, double eta) {
  require_eta(eta);
  for (double v : p) {
    if (!(v >= 0.0)) throw ValidationError("probability vector has negative or NaN entries");
  }
  const std::vector<LD> in(p.begin(), p.end());
  const auto out = smear(in, eta);
  return {out.begin(), out.end()};
}

EfficiencyInversion invert_efficiency(std::span<const double> p_eta, double eta, int n_max) {
  require_eta(eta);
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  const int len = static_cast<int>(p_eta.size());
  if (len < n_max + 1) {
    throw ValidationError("invert_efficiency: vector length " + std::to_string(len) +
                          " < n_max + 1 = " + std::to_string(n_max + 1));
  }
  EfficiencyInversion out;
  out.p.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  out.amplification_by_n.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  const LD ratio = (LD(1) - LD(eta)) / LD(eta);
  const LD log_eta = std::log(LD(eta));
  for (int n = 0; n <= n_max; ++n) {
    LD acc = 0;
    LD amp = 0;
    for (int k = 0; n + k < len; ++k) {
      // C(n+k, n) ratio^k eta^{-n}
      LD c = std::exp(detail::log_factorial<LD>(n + k) - detail::log_factorial<LD>(n) -
                      detail::log_factorial<LD>(k) - n * log_eta);
      if (k > 0) c *= ratio == LD(0) ? LD(0) : std::pow(ratio, LD(k));
      amp += c;
      acc += (k % 2 == 0 ? c : -c) * LD(p_eta[n + k]);
    }
    out.p[n] = static_cast<double>(acc);
    out.amplification_by_n[n] = static_cast<double>(amp);
  }
  out.amplification = *std::max_element(out.amplification_by_n.begin(), out.amplification_by_n.end());
  if (eta <= 0.5) {
    std::ostringstream os;
    os << "eta = " << eta << " <= 0.5: the loss-inversion series is not absolutely summable; "
       << "amplification " << out.amplification;
    out.warnings.push_back(os.str());
  }
  return out;
}

DensityMatrix pre_squeeze(const DensityMatrix& rho, const SqueezeSpec& zeta, int out_dim) {
  zeta.validate();
  if (out_dim <= 0) out_dim = rho.dim();
  if (zeta.is_identity()) {
    CMatrix m = CMatrix::Zero(out_dim, out_dim);
    const int keep = std::min(out_dim, rho.dim());
    m.topLeftCorner(keep, keep) = rho.matrix().topLeftCorner(keep, keep);
    const double lost = rho.trace() - m.trace().real();
    if (lost > kSqueezeLeakageTol) {
      throw TruncationError("pre_squeeze: out_dim too small to hold the state", rho.dim());
    }
    const double leak = 1.0 - m.trace().real();
    return DensityMatrix(std::move(m), leak);
  }

  auto squeezed = [&](int rows) {
    const CMatrix s_cols = squeeze_block(zeta, rows, rho.dim());
    CMatrix m = s_cols * rho.matrix() * s_cols.adjoint();
    return CMatrix(0.5 * (m + m.adjoint()));
  };
  CMatrix kept = squeezed(out_dim);
  const double lost = rho.trace() - kept.trace().real();
  if (lost > kSqueezeLeakageTol) {
    int rows = 2 * out_dim;
    int required = -1;
    while (required < 0 && rows <= 16384) {
      const CMatrix wide = squeezed(rows);
      double acc = 0.0;
      for (int k = 0; k < rows; ++k) {
        acc += wide(k, k).real();
        if (rho.trace() - acc <= kSqueezeLeakageTol) {
          required = k + 1;
          break;
        }
      }
      rows *= 2;
    }
    std::ostringstream os;
    os << "pre_squeeze: " << lost << " of the trace leaks past dim " << out_dim << "; need dim >= "
       << (required > 0 ? required : rows);
    throw TruncationError(os.str(), required > 0 ? required : rows);
  }
  const double leak = 1.0 - kept.trace().real();
  return DensityMatrix(std::move(kept), leak);
}

DensityMatrix squeezed_in_working_space(const DensityMatrix& rho, const SqueezeSpec& zeta,
                                        double tolerance) {
  int work = rho.dim() + squeeze_padding(zeta);
  const int limit = 4 * rho.dim() + 400;
  for (;;) {
    try {
      DensityMatrix kicked = pre_squeeze(rho, zeta, work);
      if (rho.trace() - kicked.trace() < tolerance || work > limit) return kicked;
    } catch (const TruncationError&) {
      if (work > limit) throw;
    }
    work += work / 2;
  }
}

SampledCounts sample_counts(std::span<const double> p, std::uint64_t shots, std::mt19937_64& rng) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  SampledCounts out;
  out.shots = shots;
  out.counts.assign(p.size(), 0);
  std::uint64_t remaining = shots;
  double remaining_mass = 1.0;
  for (std::size_t k = 0; k < p.size() && remaining > 0; ++k) {
    const double pk = std::max(0.0, p[k]);
    double q = pk <= 0.0 ? 0.0 : (remaining_mass > pk ? pk / remaining_mass : 1.0);
    q = std::clamp(q, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(remaining, q);
    const std::uint64_t c = draw(rng);
    out.counts[k] = c;
    remaining -= c;
    remaining_mass -= pk;
  }
  out.overflow = remaining;
  return out;
}

SampledCounts sample_counts(std::span<const double> p, std::uint64_t shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_counts(p, shots, rng);
}

void MeasurementTable::validate() const {
  require_eta(eta);
  if (n_max < 0) throw ValidationError("table n_max must be >= 0");
  if (probs.size() != alphas.size() || tail_mass.size() != alphas.size()) {
    throw ValidationError("table: inconsistent row counts");
  }
  if (sampled() && counts.size() != alphas.size()) {
    throw ValidationError("table: sampled mode requires counts for every node");
  }
  if (squeeze) squeeze->validate();
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (probs[j].size() != static_cast<std::size_t>(n_max + 1)) {
      throw ValidationError("table: probability vector length differs from n_max + 1");
    }
    double sum = 0.0;
    for (double v : probs[j]) {
      if (!(v >= 0.0)) throw ValidationError("table: negative or NaN probability");
      sum += v;
    }
    if (sum > 1.0 + 1e-9) throw ValidationError("table: probabilities sum above 1");
  }
  std::set<std::pair<double, double>> seen;
  for (const auto& a : alphas) {
    if (!seen.emplace(a.real(), a.imag()).second) {
      throw ValidationError("table: reference amplitudes are not pairwise distinct");
    }
  }
}

MeasurementTable build_table(const DensityMatrix& rho, const PhaseSpaceGrid& grid,
                             const TableOptions& options) {
  require_eta(options.eta);
  if (options.n_max < 0) throw ValidationError("n_max must be >= 0");
  if (options.shots && *options.shots < 1) throw ValidationError("shots must be >= 1");

  MeasurementTable table;
  table.eta = options.eta;
  table.n_max = options.n_max;
  table.shots = options.shots;
  table.grid = grid.spec;
  if (options.squeeze && !options.squeeze->is_identity()) table.squeeze = options.squeeze;

  const CMatLD state = table.squeeze
                           ? to_ld(squeezed_in_working_space(rho, *table.squeeze).matrix())
                           : to_ld(rho.matrix());
  const int dim = static_cast<int>(state.rows());

  std::mt19937_64 rng(options.seed);
  const std::size_t rows = static_cast<std::size_t>(options.n_max + 1);
  table.alphas.reserve(grid.size());
  table.probs.reserve(grid.size());
  table.tail_mass.reserve(grid.size());
  for (const Complex& alpha : grid.nodes) {
    const int cutoff = std::max(options.n_max + 1, populated_cutoff(dim, std::abs(alpha)));
    auto p = displaced_populations(state, CLD(alpha), cutoff);
    p = smear(p, options.eta);

    std::vector<double> kept(rows);
    LD total = 0;
    for (std::size_t n = 0; n < rows; ++n) {
      kept[n] = static_cast<double>(p[n]);
      total += p[n];
    }
    table.alphas.push_back(alpha);
    if (options.shots) {
      const auto drawn = sample_counts(kept, *options.shots, rng);
      std::vector<double> freq(rows);
      for (std::size_t n = 0; n < rows; ++n) {
        freq[n] = static_cast<double>(drawn.counts[n]) / static_cast<double>(*options.shots);
      }
      table.probs.push_back(std::move(freq));
      table.counts.push_back(drawn.counts);
      table.tail_mass.push_back(static_cast<double>(drawn.overflow) /
                                static_cast<double>(*options.shots));
    } else {
      table.probs.push_back(std::move(kept));
      table.tail_mass.push_back(std::max(0.0, static_cast<double>(LD(1) - total)));
    }
  }

  const double worst_tail = table.tail_mass.empty()
                                ? 0.0
                                : *std::max_element(table.tail_mass.begin(), table.tail_mass.end());
  if (worst_tail > kTailWarning) {
    std::ostringstream os;
    os << "up to " << worst_tail << " of the count distribution lies above n_max = " << options.n_max;
    table.warnings.push_back(os.str());
  }
  return table;
}

}  // namespace pntomo
