#include "rdm/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rdm/error.hpp"
#include "rdm/stats.hpp"

namespace rdm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(chunk, out[i]) for chunks first .. first+count-1; out is indexed
// by chunk offset, so the merge order never depends on scheduling.
template <class Acc, class Body>
std::vector<Acc> run_chunks(std::int64_t first, std::int64_t count, int threads, Body body) {
  std::vector<Acc> out(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i; (i = next.fetch_add(1)) < count;) body(first + i, out[static_cast<std::size_t>(i)]);
  };
  const int n = std::min<std::int64_t>(threads, count);
  if (n <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

std::int64_t chunk_length(std::int64_t chunk, std::int64_t total) {
  return std::min(kChunkSize, total - chunk * kChunkSize);
}

std::complex<double> complex_gaussian(std::normal_distribution<double>& n, Rng& rng) {
  const double re = n(rng), im = n(rng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

ComplexMatrix bures_factor(int d, Rng& rng) {
  const ComplexMatrix u = haar_unitary(d, rng);
  const ComplexMatrix g = ginibre(d, d, rng);
  return (ComplexMatrix::Identity(d, d) + u) * g;
}

ComplexMatrix normalized_gram(const ComplexMatrix& a) {
  ComplexMatrix rho = a * a.adjoint();
  const double tr = rho.trace().real();
  rho /= tr;
  return rho;
}

double row_norm_energy(const ComplexMatrix& a, const std::vector<double>& flat) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double r = a.row(i).squaredNorm();
    num += flat[static_cast<std::size_t>(i)] * r;
    den += r;
  }
  return num / den;
}

int checked_dim(const Spectrum& spectrum) {
  if (spectrum.dim() > 4096) fail(ErrorCode::InvalidDimension, "sampling supports d <= 4096");
  return static_cast<int>(spectrum.dim());
}

}  // namespace

Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  return Rng(splitmix64(seed ^ splitmix64(chunk + 0x632BE59BD9B4E019ull)));
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = complex_gaussian(n, rng);
  return g;
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
  const ComplexMatrix z = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? rjj / a : std::complex<double>(1.0);
  }
  return q;
}

ComplexMatrix sample_hs(int d, Rng& rng) { return normalized_gram(ginibre(d, d, rng)); }

ComplexMatrix sample_bh(int d, Rng& rng) { return normalized_gram(bures_factor(d, rng)); }

ComplexMatrix sample_pure(int d, Rng& rng) { return normalized_gram(ginibre(d, 1, rng)); }

ComplexMatrix sample_state(Ensemble ensemble, int d, Rng& rng) {
  if (d < 2) fail(ErrorCode::InvalidDimension, "d must be at least 2");
  switch (ensemble) {
    case Ensemble::HS: return sample_hs(d, rng);
    case Ensemble::BH: return sample_bh(d, rng);
    case Ensemble::PureHaar: return sample_pure(d, rng);
  }
  fail(ErrorCode::InvalidArgument, "unknown ensemble");
}

double energy_of(const ComplexMatrix& rho, const std::vector<double>& flat) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) e += flat[static_cast<std::size_t>(i)] * rho(i, i).real();
  return e;
}

DensityMatrixSample make_sample(ComplexMatrix rho, const std::vector<double>& flat) {
  const double e = energy_of(rho, flat);
  return {std::move(rho), e};
}

double sample_energy(Ensemble ensemble, const std::vector<double>& flat, Rng& rng) {
  const int d = static_cast<int>(flat.size());
  switch (ensemble) {
    case Ensemble::HS: return row_norm_energy(ginibre(d, d, rng), flat);
    case Ensemble::BH: return row_norm_energy(bures_factor(d, rng), flat);
    case Ensemble::PureHaar: return row_norm_energy(ginibre(d, 1, rng), flat);
  }
  fail(ErrorCode::InvalidArgument, "unknown ensemble");
}

std::vector<double> sample_energies(const McConfig& config, const Spectrum& spectrum) {
  if (config.samples < 1) fail(ErrorCode::InvalidArgument, "sample count must be positive");
  checked_dim(spectrum);
  const auto flat = spectrum.flattened();
  const std::int64_t chunks = (config.samples + kChunkSize - 1) / kChunkSize;
  auto parts = run_chunks<std::vector<double>>(0, chunks, resolve_threads(config.threads),
                                               [&](std::int64_t c, std::vector<double>& out) {
                                                 Rng rng = chunk_rng(config.seed, static_cast<std::uint64_t>(c));
                                                 const auto len = chunk_length(c, config.samples);
                                                 out.reserve(static_cast<std::size_t>(len));
                                                 for (std::int64_t i = 0; i < len; ++i)
                                                   out.push_back(sample_energy(config.ensemble, flat, rng));
                                               });
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(config.samples));
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

Histogram histogram_of(const std::vector<double>& energies, double lower, double upper, int bins) {
  if (bins < 10) fail(ErrorCode::InvalidArgument, "histogram needs at least 10 bins");
  if (!(lower < upper)) fail(ErrorCode::InvalidArgument, "histogram range is empty");
  Histogram h;
  h.lower = lower;
  h.upper = upper;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  h.total = static_cast<std::int64_t>(energies.size());
  const double w = (upper - lower) / bins;
  for (double e : energies) {
    if (e < lower || e > upper) continue;
    auto i = static_cast<std::size_t>((e - lower) / w);
    if (i >= h.counts.size()) i = h.counts.size() - 1;
    ++h.counts[i];
    ++h.in_range;
  }
  h.empty = h.in_range == 0;
  for (auto k : h.counts) {
    const double n = static_cast<double>(std::max<std::int64_t>(h.total, 1));
    h.density.push_back(static_cast<double>(k) / (n * w));
    const auto ci = wilson_interval(k, h.total);
    h.density_error.push_back(0.5 * (ci.upper - ci.lower) / w);
  }
  return h;
}

Histogram estimate_dos_mc(const McConfig& config, const Spectrum& spectrum) {
  auto h = histogram_of(sample_energies(config, spectrum), spectrum.ground(), spectrum.top(), config.bins);
  if (h.empty) fail(ErrorCode::EmptyHistogram, "no sample energies fell inside [E_0, E_max]");
  return h;
}

namespace {

struct ShellAccumulator {
  ComplexMatrix sum;
  Eigen::MatrixXd sum_sq_re, sum_sq_im;
  double e = 0, e2 = 0, h2 = 0, h2sq = 0;
  std::int64_t accepted = 0, drawn = 0;

  void init(int d) {
    sum = ComplexMatrix::Zero(d, d);
    sum_sq_re = Eigen::MatrixXd::Zero(d, d);
    sum_sq_im = Eigen::MatrixXd::Zero(d, d);
  }
  void merge(const ShellAccumulator& o) {
    sum += o.sum;
    sum_sq_re += o.sum_sq_re;
    sum_sq_im += o.sum_sq_im;
    e += o.e;
    e2 += o.e2;
    h2 += o.h2;
    h2sq += o.h2sq;
    accepted += o.accepted;
    drawn += o.drawn;
  }
};

double standard_error(double sum, double sum_sq, std::int64_t n) {
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
  return std::sqrt(var / nn);
}

}  // namespace

ConditionalAverage conditional_average_state(const McConfig& config, const Spectrum& spectrum) {
  if (config.samples < 1) fail(ErrorCode::InvalidArgument, "sample count must be positive");
  const int d = checked_dim(spectrum);
  const auto flat = spectrum.flattened();
  const int threads = resolve_threads(config.threads);
  const std::int64_t max_chunks = (config.samples + kChunkSize - 1) / kChunkSize;
  const std::int64_t batch = std::max<std::int64_t>(2 * threads, 4);
  double delta = config.shell_half_width > 0.0 ? config.shell_half_width : 0.005 * spectrum.span();
  bool widened = false;

  for (int attempt = 0;; ++attempt) {
    ShellAccumulator total;
    total.init(d);
    bool done = false;
    for (std::int64_t first = 0; first < max_chunks && !done; first += batch) {
      const std::int64_t count = std::min(batch, max_chunks - first);
      auto parts = run_chunks<ShellAccumulator>(first, count, threads, [&](std::int64_t c, ShellAccumulator& acc) {
        acc.init(d);
        Rng rng = chunk_rng(config.seed, static_cast<std::uint64_t>(c));
        const auto len = chunk_length(c, config.samples);
        for (std::int64_t i = 0; i < len; ++i) {
          ComplexMatrix rho = sample_state(config.ensemble, d, rng);
          ++acc.drawn;
          const double e = energy_of(rho, flat);
          if (std::fabs(e - config.shell_center) > delta) continue;
          ++acc.accepted;
          acc.sum += rho;
          acc.sum_sq_re += rho.real().cwiseAbs2();
          acc.sum_sq_im += rho.imag().cwiseAbs2();
          double h2 = 0.0;
          for (int k = 0; k < d; ++k) h2 += flat[static_cast<std::size_t>(k)] * flat[static_cast<std::size_t>(k)] * rho(k, k).real();
          acc.e += e;
          acc.e2 += e * e;
          acc.h2 += h2;
          acc.h2sq += h2 * h2;
        }
      });
      for (const auto& p : parts) {
        total.merge(p);
        if (config.target_accepted > 0 && total.accepted >= config.target_accepted) {
          done = true;
          break;
        }
      }
      if (first == 0 && attempt < 20 &&
          static_cast<double>(total.accepted) < 1e-4 * static_cast<double>(total.drawn))
        break;
    }
    const bool low = static_cast<double>(total.accepted) < 1e-4 * static_cast<double>(total.drawn);
    if (low && attempt < 20) {
      delta *= 2.0;
      widened = true;
      continue;
    }
    if (total.accepted == 0) fail(ErrorCode::ShellEmpty, "no samples landed in the energy shell");

    ConditionalAverage out;
    const double n = static_cast<double>(total.accepted);
    out.mean = total.sum / n;
    out.stderr_real = Eigen::MatrixXd(d, d);
    out.stderr_imag = Eigen::MatrixXd(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        out.stderr_real(i, j) = standard_error(total.sum(i, j).real(), total.sum_sq_re(i, j), total.accepted);
        out.stderr_imag(i, j) = standard_error(total.sum(i, j).imag(), total.sum_sq_im(i, j), total.accepted);
      }
    out.mean_energy = total.e / n;
    out.mean_energy_stderr = standard_error(total.e, total.e2, total.accepted);
    out.mean_h2 = total.h2 / n;
    out.mean_h2_stderr = standard_error(total.h2, total.h2sq, total.accepted);
    out.accepted = total.accepted;
    out.drawn = total.drawn;
    out.acceptance = n / static_cast<double>(total.drawn);
    out.half_width = delta;
    out.widened = widened;
    return out;
  }
}

StationarityResult stationarity_check(const McConfig& config, const Spectrum& spectrum) {
  const auto avg = conditional_average_state(config, spectrum);
  const auto flat = spectrum.flattened();
  const auto d = static_cast<int>(flat.size());
  // [rho, H]_ij = rho_ij (E_j - E_i): linear in rho, so its mean and variance
  // follow entrywise from those of rho.
  double norm2 = 0.0, var = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double w = flat[static_cast<std::size_t>(j)] - flat[static_cast<std::size_t>(i)];
      norm2 += w * w * std::norm(avg.mean(i, j));
      var += w * w * (avg.stderr_real(i, j) * avg.stderr_real(i, j) + avg.stderr_imag(i, j) * avg.stderr_imag(i, j));
    }
  StationarityResult r;
  r.commutator_norm = std::sqrt(norm2);
  r.standard_error = std::sqrt(var);
  r.statistic = r.standard_error > 0.0 ? r.commutator_norm / r.standard_error : 0.0;
  r.accepted = avg.accepted;
  r.passed = r.statistic < 3.0;
  return r;
}

}  // namespace rdm
