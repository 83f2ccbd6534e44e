#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scpsim/bits.hpp"
#include "scpsim/errors.hpp"
#include "scpsim/rng.hpp"

namespace scpsim {

// Fourier conventions, shared by everything below. For h : {0,1}^m -> R,
//
//   h^(s) = 2^-m * sum_x h(x) * (-1)^(s.x),    h(x) = sum_s h^(s) * (-1)^(s.x),
//
// with s.x the inner product mod 2 and bit strings packed MSB-first.

constexpr int kExactTransformMaxBits = 20;   // full 2^m table / WHT
constexpr int kExactCoefficientMaxBits = 24; // single-coefficient exhaustive sum
constexpr double kSpectrumZeroCutoff = 1e-12;

enum class FunctionFamily { Parity, InnerProduct, And, Junta, TruthTable, SparsePoly };

std::string family_name(FunctionFamily family);

// A non-zero {0,1}-valued post-processing function on m bits together with a
// declared bound on its Fourier sparsity. The bound is part of the contract:
// it is never inferred from evaluator access.
class BooleanFunction {
 public:
  static BooleanFunction parity(int m);
  static BooleanFunction conjunction(int m);  // AND of all m bits
  static BooleanFunction inner_product(int m, std::uint64_t s);
  static BooleanFunction junta(int m, std::vector<int> vars, std::vector<std::uint8_t> core_table);
  static BooleanFunction truth_table(int m, std::vector<std::uint8_t> table);
  static BooleanFunction sparse_poly(int m, std::vector<std::pair<std::uint64_t, double>> terms);

  // Text format described in the README (header `fn m=<int> family=<tag>`
  // plus a family-specific payload).
  static BooleanFunction parse(const std::string& text);
  std::string render() const;

  int m() const { return m_; }
  FunctionFamily family() const { return family_; }
  std::uint64_t sparsity_bound() const { return sparsity_bound_; }

  int operator()(std::uint64_t x) const { return eval_(x); }

  // Exact Fourier degree when computable (always for m <= 20), otherwise
  // derived from the family structure.
  int degree() const;

  bool has_truth_table() const { return table_ != nullptr; }
  const std::vector<std::uint8_t>& table() const;

  bool operator==(const BooleanFunction& other) const;

  // Family payload accessors (valid for the matching family only).
  std::uint64_t ip_mask() const { return ip_mask_; }
  const std::vector<int>& junta_vars() const { return junta_vars_; }
  const std::vector<std::uint8_t>& junta_table() const { return junta_table_; }
  const std::vector<std::pair<std::uint64_t, double>>& poly_terms() const { return poly_terms_; }

 private:
  BooleanFunction() = default;
  void finish_construction();

  int m_ = 0;
  FunctionFamily family_ = FunctionFamily::TruthTable;
  std::function<int(std::uint64_t)> eval_;
  std::uint64_t sparsity_bound_ = 1;

  std::uint64_t ip_mask_ = 0;
  std::vector<int> junta_vars_;
  std::vector<std::uint8_t> junta_table_;
  std::vector<std::pair<std::uint64_t, double>> poly_terms_;
  std::shared_ptr<const std::vector<std::uint8_t>> table_;  // materialized for m <= 20
};

// The +/-1-valued lift g(x) = (-1)^f(x) = 1 - 2 f(x).
struct SignedFunction {
  int m = 0;
  std::function<int(std::uint64_t)> eval;  // returns -1 or +1
  std::uint64_t sparsity_bound = 1;
  std::shared_ptr<const std::vector<std::int8_t>> table;  // present when m <= 20

  bool has_truth_table() const { return table != nullptr; }
};

SignedFunction lift_to_signed(const BooleanFunction& f);

// Sparse map from m-bit index strings to real coefficients.
class FourierSpectrum {
 public:
  FourierSpectrum(int m, std::map<std::uint64_t, double> coeffs)
      : m_(m), coeffs_(std::move(coeffs)) {}

  int m() const { return m_; }
  const std::map<std::uint64_t, double>& coeffs() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }

  double at(std::uint64_t s) const {
    auto it = coeffs_.find(s);
    return it == coeffs_.end() ? 0.0 : it->second;
  }

 private:
  int m_;
  std::map<std::uint64_t, double> coeffs_;
};

// f^(s) by the defining exhaustive sum; rejects m > 24.
double fourier_coefficient_exact(const std::function<double(std::uint64_t)>& f, int m,
                                 std::uint64_t s);

// Full transform via the fast Walsh-Hadamard butterfly; coefficients below
// 1e-12 in magnitude are dropped. Rejects m > 20.
FourierSpectrum wht_spectrum(const std::vector<double>& values, int m);
FourierSpectrum wht_spectrum(const BooleanFunction& f);
FourierSpectrum wht_spectrum(const SignedFunction& g);

// Maximum Hamming weight over the support; rejects an empty spectrum.
int degree(const FourierSpectrum& spectrum);

// h(x) = s.x with spectrum {0^m: 1/2, s: -1/2}; rejects s = 0^m.
BooleanFunction make_inner_product_function(int m, std::uint64_t s);

struct CoefficientEstimate {
  double value = 0.0;
  std::uint64_t samples = 0;
};

// Empirical mean of K = ceil(4 ln(2/delta) / accuracy^2) i.i.d. samples
// g(x)(-1)^(s.x) with x uniform, so that |A(s) - g^(s)| <= accuracy with
// probability >= 1 - delta.
CoefficientEstimate estimate_fourier_coefficient_detail(const SignedFunction& g, std::uint64_t s,
                                                        double accuracy, double delta,
                                                        std::uint64_t seed);

double estimate_fourier_coefficient(const SignedFunction& g, std::uint64_t s, double accuracy,
                                    double delta, std::uint64_t seed);

struct KMParams {
  double theta = 1.0;            // threshold polynomial value, >= 1
  double delta = 0.01;           // overall failure probability, < 1/2
  std::uint64_t sample_budget = 0;  // per weight estimate; 0 = derive from (theta, delta)
  bool allow_exact_shortcut = true; // use the exact transform when a truth table exists
};

// Significant-coefficient recovery. With probability >= 1 - delta the output
// satisfies: members have |g^(s)| > 1/(2 theta); non-members have
// |g^(s)| < 1/theta; and fewer than 4 theta^2 indices are returned. Throws
// capacity_error if the live-prefix frontier exceeds 64 theta^2, which
// signals a violated sparsity promise.
std::vector<std::uint64_t> km_significant_set(const SignedFunction& g, const KMParams& params,
                                              std::uint64_t seed);

}  // namespace scpsim
