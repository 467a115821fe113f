#pragma once

// Measurement ensembles, sparse signals, spherical noise and the problem
// instances built from them, plus the binary container used to share cases.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgp/linalg.hpp"

namespace tgp {

enum class Ensemble : std::uint32_t { gaussian = 0, partial_fourier = 1, user = 2 };

std::string_view to_string(Ensemble ensemble) noexcept;
/// Accepts "gaussian", "fourier", "partial_fourier" and "user".
Ensemble parse_ensemble(std::string_view name);

/// N x K matrix with unit-norm columns and the recipe that produced it.
struct MeasurementMatrix {
  CMatrix matrix;
  Ensemble ensemble = Ensemble::user;
  std::uint64_t seed = 0;

  std::size_t rows() const noexcept { return matrix.rows(); }
  std::size_t cols() const noexcept { return matrix.cols(); }
};

/// Wraps a caller-supplied matrix, rescaling each column to unit norm.
/// Throws ParameterError on an all-zero column.
MeasurementMatrix make_user_matrix(CMatrix matrix);

MeasurementMatrix gen_gaussian(std::size_t n, std::size_t k, std::uint64_t seed);
MeasurementMatrix gen_partial_fourier(std::size_t n, std::size_t k, std::uint64_t seed);
MeasurementMatrix generate(Ensemble ensemble, std::size_t n, std::size_t k, std::uint64_t seed);

/// Rows of the K x K DFT kept by gen_partial_fourier for this seed, ascending.
std::vector<std::size_t> partial_fourier_rows(std::size_t n, std::size_t k, std::uint64_t seed);

/// max_{i<j} |<a_i, a_j>|.
double mutual_coherence(const CMatrix& a);
inline double mutual_coherence(const MeasurementMatrix& a) { return mutual_coherence(a.matrix); }

/// M-sparse vector of length K. An empty support is the zero signal.
class SparseSignal {
 public:
  SparseSignal(std::size_t length, IndexSet support, std::vector<Complex> values);

  static SparseSignal zero(std::size_t length) { return {length, IndexSet{}, {}}; }

  std::size_t length() const noexcept { return length_; }
  std::size_t sparsity() const noexcept { return support_.size(); }
  const IndexSet& support() const noexcept { return support_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  CVector dense() const;
  double min_magnitude() const;

 private:
  std::size_t length_;
  IndexSet support_;
  std::vector<Complex> values_;
};

/// Support uniform without replacement; values 1 + N(0,1), redrawn if exactly 0.
SparseSignal gen_signal(std::size_t k, std::size_t m, std::uint64_t seed);
/// Same support draw as gen_signal, all values equal to 1.
SparseSignal gen_unit_signal(std::size_t k, std::size_t m, std::uint64_t seed);

/// Real Gaussian vector normalized to unit length: uniform on the sphere.
CVector sample_sphere(std::size_t n, std::uint64_t seed);

struct ProblemInstance {
  std::shared_ptr<const MeasurementMatrix> a;
  SparseSignal x;
  CVector e;
  CVector b;
  double delta = 0.0;           // ||e|| / ||A x||, 0 for pure noise
  double noiseless_norm = 0.0;  // ||A x||
  double noise_norm = 0.0;      // ||e||
};

/// b = A x + e with e = delta ||A x|| u, u uniform on the sphere.
ProblemInstance make_instance(std::shared_ptr<const MeasurementMatrix> a, SparseSignal x,
                              double delta, std::uint64_t seed);

/// x = 0 and b = e with ||e|| = noise_norm.
ProblemInstance make_noise_instance(std::shared_ptr<const MeasurementMatrix> a, double noise_norm,
                                    std::uint64_t seed);

// Binary container, all fields little-endian:
//   "PLAB" | u32 version | u64 N | u64 K | u32 ensemble | u64 seed
//   N*K row-major (f64 re, f64 im)
//   optional: "VECB" followed by N (f64 re, f64 im) for an observation b
struct Container {
  MeasurementMatrix matrix;
  std::optional<CVector> observation;
};

inline constexpr std::uint32_t kContainerVersion = 1;

void save_container(const std::filesystem::path& path, const MeasurementMatrix& a,
                    const std::optional<CVector>& observation = std::nullopt);
Container load_container(const std::filesystem::path& path);

}  // namespace tgp
