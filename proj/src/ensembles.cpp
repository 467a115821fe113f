#include "tgp/ensembles.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <limits>
#include <numeric>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "tgp/errors.hpp"
#include "tgp/random.hpp"

namespace tgp {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::array<char, 4> kMagic{'P', 'L', 'A', 'B'};
constexpr std::array<char, 4> kVectorTag{'V', 'E', 'C', 'B'};

void normalize_columns(CMatrix& a) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    auto col = a.column(j);
    const double n = norm2(col);
    if (n == 0.0) throw ParameterError("column " + std::to_string(j) + " is identically zero");
    for (auto& v : col) v /= n;
  }
}

// First `count` entries of a Fisher-Yates shuffle of [0, k).
std::vector<std::size_t> partial_shuffle(std::size_t k, std::size_t count, Philox4x64& rng) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    boost::random::uniform_int_distribution<std::size_t> pick(i, k - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  return idx;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.put(static_cast<char>((v >> s) & 0xFF));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int s = 0; s < 64; s += 8) out.put(static_cast<char>((v >> s) & 0xFF));
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_uint(std::istream& in, int bytes, const std::filesystem::path& path) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw IoError("truncated container: " + path.string());
    }
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

double get_f64(std::istream& in, const std::filesystem::path& path) {
  return std::bit_cast<double>(get_uint(in, 8, path));
}

}  // namespace

std::string_view to_string(Ensemble ensemble) noexcept {
  switch (ensemble) {
    case Ensemble::gaussian: return "gaussian";
    case Ensemble::partial_fourier: return "partial_fourier";
    case Ensemble::user: return "user";
  }
  return "user";
}

Ensemble parse_ensemble(std::string_view name) {
  if (name == "gaussian") return Ensemble::gaussian;
  if (name == "fourier" || name == "partial_fourier") return Ensemble::partial_fourier;
  if (name == "user") return Ensemble::user;
  throw ParameterError("unknown ensemble '" + std::string(name) + "'");
}

MeasurementMatrix make_user_matrix(CMatrix matrix) {
  normalize_columns(matrix);
  return {std::move(matrix), Ensemble::user, 0};
}

MeasurementMatrix gen_gaussian(std::size_t n, std::size_t k, std::uint64_t seed) {
  CMatrix a(n, k);
  Philox4x64 rng(seed);
  boost::random::normal_distribution<double> normal;
  for (std::size_t j = 0; j < k; ++j) {
    for (auto& v : a.column(j)) v = normal(rng);
  }
  normalize_columns(a);
  return {std::move(a), Ensemble::gaussian, seed};
}

std::vector<std::size_t> partial_fourier_rows(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n > k) {
    throw DimensionError("partial Fourier needs N <= K (N = " + std::to_string(n) +
                         ", K = " + std::to_string(k) + ")");
  }
  Philox4x64 rng(seed);
  auto rows = partial_shuffle(k, n, rng);
  std::sort(rows.begin(), rows.end());
  return rows;
}

MeasurementMatrix gen_partial_fourier(std::size_t n, std::size_t k, std::uint64_t seed) {
  const auto rows = partial_fourier_rows(n, k, seed);
  CMatrix a(n, k);

  // Unitary DFT entries exp(-2 pi i r j / K) / sqrt(K), rescaled by sqrt(K / N).
  std::vector<Complex> roots(k);
  for (std::size_t m = 0; m < k; ++m) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(k);
    roots[m] = Complex{std::cos(angle), std::sin(angle)};
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    auto col = a.column(j);
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = static_cast<std::size_t>((static_cast<u128>(rows[i]) * j) % k);
      col[i] = roots[m] * scale;
    }
  }
  normalize_columns(a);
  return {std::move(a), Ensemble::partial_fourier, seed};
}

MeasurementMatrix generate(Ensemble ensemble, std::size_t n, std::size_t k, std::uint64_t seed) {
  switch (ensemble) {
    case Ensemble::gaussian: return gen_gaussian(n, k, seed);
    case Ensemble::partial_fourier: return gen_partial_fourier(n, k, seed);
    case Ensemble::user: break;
  }
  throw ParameterError("the user ensemble cannot be generated; load it from a container");
}

double mutual_coherence(const CMatrix& a) {
  const std::size_t k = a.cols();
  if (k < 2) throw ParameterError("mutual coherence needs at least two columns");
  // Column blocks stay cache resident while every earlier column streams past.
  constexpr std::size_t kBlock = 16;
  double best = 0.0;
  for (std::size_t jb = 0; jb < k; jb += kBlock) {
    const std::size_t jend = std::min(k, jb + kBlock);
    for (std::size_t i = 0; i + 1 < jend; ++i) {
      const auto ci = a.column(i);
      for (std::size_t j = std::max(jb, i + 1); j < jend; ++j) {
        best = std::max(best, std::abs(inner(ci, a.column(j))));
      }
    }
  }
  return best;
}

SparseSignal::SparseSignal(std::size_t length, IndexSet support, std::vector<Complex> values)
    : length_(length), support_(std::move(support)), values_(std::move(values)) {
  if (length_ == 0) throw DimensionError("signal length must be positive");
  if (support_.size() != values_.size()) {
    throw DimensionError("support and values differ in size");
  }
  if (!support_.empty() && support_.indices().back() >= length_) {
    throw DimensionError("support index out of range");
  }
  for (const auto& v : values_) {
    if (v == Complex{}) throw ParameterError("signal values on the support must be nonzero");
  }
}

CVector SparseSignal::dense() const {
  CVector x(length_);
  for (std::size_t p = 0; p < support_.size(); ++p) x[support_[p]] = values_[p];
  return x;
}

double SparseSignal::min_magnitude() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : values_) m = std::min(m, std::abs(v));
  return m;
}

namespace {

SparseSignal draw_signal(std::size_t k, std::size_t m, std::uint64_t seed, bool unit) {
  if (m < 1 || m > k) {
    throw ParameterError("sparsity M = " + std::to_string(m) + " must lie in [1, K = " +
                         std::to_string(k) + "]");
  }
  Philox4x64 rng(seed);
  auto picks = partial_shuffle(k, m, rng);
  std::sort(picks.begin(), picks.end());
  std::vector<Complex> values(m, Complex{1.0, 0.0});
  if (!unit) {
    boost::random::normal_distribution<double> normal;
    for (auto& v : values) {
      double draw = 0.0;
      do {
        draw = 1.0 + normal(rng);
      } while (draw == 0.0);
      v = draw;
    }
  }
  return {k, IndexSet(std::move(picks)), std::move(values)};
}

}  // namespace

SparseSignal gen_signal(std::size_t k, std::size_t m, std::uint64_t seed) {
  return draw_signal(k, m, seed, false);
}

SparseSignal gen_unit_signal(std::size_t k, std::size_t m, std::uint64_t seed) {
  return draw_signal(k, m, seed, true);
}

CVector sample_sphere(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DimensionError("sphere dimension must be positive");
  Philox4x64 rng(seed);
  boost::random::normal_distribution<double> normal;
  CVector v(n);
  double len = 0.0;
  do {
    for (auto& x : v) x = normal(rng);
    len = norm2(v);
  } while (len == 0.0);
  for (auto& x : v) x /= len;
  return v;
}

ProblemInstance make_instance(std::shared_ptr<const MeasurementMatrix> a, SparseSignal x,
                              double delta, std::uint64_t seed) {
  if (!a) throw ParameterError("make_instance: missing matrix");
  if (!(delta >= 0.0)) throw ParameterError("noise level delta must be nonnegative");
  if (x.length() != a->cols()) throw DimensionError("signal length differs from K");

  const std::size_t n = a->rows();
  CVector ax = x.sparsity() == 0
                   ? CVector(n)
                   : a->matrix.apply_columns(x.support(), CVector(x.values()));
  const double clean = norm2(ax);
  CVector e(n);
  if (delta > 0.0 && clean > 0.0) e = (delta * clean) * sample_sphere(n, seed);
  CVector b = ax + e;
  const double noise = norm2(e);
  return {std::move(a), std::move(x), std::move(e), std::move(b),
          clean > 0.0 ? delta : 0.0, clean, noise};
}

ProblemInstance make_noise_instance(std::shared_ptr<const MeasurementMatrix> a, double noise_norm,
                                    std::uint64_t seed) {
  if (!a) throw ParameterError("make_noise_instance: missing matrix");
  if (!(noise_norm >= 0.0)) throw ParameterError("noise norm must be nonnegative");
  const std::size_t n = a->rows();
  CVector e = noise_norm * sample_sphere(n, seed);
  CVector b = e;
  const double len = norm2(e);
  auto x = SparseSignal::zero(a->cols());
  return {std::move(a), std::move(x), std::move(e), std::move(b), 0.0, 0.0, len};
}

void save_container(const std::filesystem::path& path, const MeasurementMatrix& a,
                    const std::optional<CVector>& observation) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kContainerVersion);
  put_u64(out, a.rows());
  put_u64(out, a.cols());
  put_u32(out, static_cast<std::uint32_t>(a.ensemble));
  put_u64(out, a.seed);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      put_f64(out, a.matrix(i, j).real());
      put_f64(out, a.matrix(i, j).imag());
    }
  }
  if (observation) {
    if (observation->size() != a.rows()) {
      throw DimensionError("observation length differs from N");
    }
    out.write(kVectorTag.data(), kVectorTag.size());
    for (const auto& v : *observation) {
      put_f64(out, v.real());
      put_f64(out, v.imag());
    }
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

Container load_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("not a PLAB container: " + path.string());
  const auto version = static_cast<std::uint32_t>(get_uint(in, 4, path));
  if (version != kContainerVersion) {
    throw IoError("unsupported container version " + std::to_string(version) + ": " +
                  path.string());
  }
  const std::uint64_t n = get_uint(in, 8, path);
  const std::uint64_t k = get_uint(in, 8, path);
  const auto tag = static_cast<std::uint32_t>(get_uint(in, 4, path));
  const std::uint64_t seed = get_uint(in, 8, path);
  if (n == 0 || k == 0 || n > (1ULL << 24) || k > (1ULL << 24)) {
    throw IoError("implausible dimensions in container: " + path.string());
  }
  if (tag > static_cast<std::uint32_t>(Ensemble::user)) {
    throw IoError("unknown ensemble tag in container: " + path.string());
  }

  CMatrix m(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double re = get_f64(in, path);
      const double im = get_f64(in, path);
      m(i, j) = Complex{re, im};
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (std::abs(norm2(m.column(j)) - 1.0) > 1e-12) {
      normalize_columns(m);
      break;
    }
  }

  Container c{{std::move(m), static_cast<Ensemble>(tag), seed}, std::nullopt};
  std::array<char, 4> trailer{};
  in.read(trailer.data(), trailer.size());
  if (in.gcount() == 0) return c;
  if (in.gcount() != 4 || trailer != kVectorTag) {
    throw IoError("unexpected trailing data in container: " + path.string());
  }
  CVector b(n);
  for (auto& v : b) {
    const double re = get_f64(in, path);
    const double im = get_f64(in, path);
    v = Complex{re, im};
  }
  c.observation = std::move(b);
  return c;
}

}  // namespace tgp
