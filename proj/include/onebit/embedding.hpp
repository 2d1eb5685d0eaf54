#pragma once

// Sign-linear maps x -> sgn(Ax) and x -> sgn(Ax + eta) into packed Hamming
// cube codes.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "onebit/geometry.hpp"
#include "onebit/stochastics.hpp"

namespace onebit {

/// +1 iff v > 0. Zero (either sign) quantizes to -1.
inline bool sign_quantize(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("sign_quantize: non-finite input");
  return v > 0.0;
}

/// Row-major m x n measurement matrix; row k is the direction g_k.
class SensingMatrix {
public:
  SensingMatrix(std::size_t m, std::size_t n, std::vector<double> entries)
      : m_(m), n_(n), entries_(std::move(entries)) {
    if (m_ == 0 || n_ == 0) throw std::invalid_argument("SensingMatrix: m and n must be >= 1");
    if (entries_.size() != m_ * n_) throw std::invalid_argument("SensingMatrix: entry count != m*n");
    for (double v : entries_)
      if (!std::isfinite(v)) throw std::invalid_argument("SensingMatrix: non-finite entry");
  }

  /// iid N(0,1) entries, drawn row by row.
  static SensingMatrix gaussian(RngStream& stream, std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw std::invalid_argument("SensingMatrix: m and n must be >= 1");
    return SensingMatrix(m, n, gaussian_vector(stream, m * n));
  }

  static SensingMatrix identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return SensingMatrix(n, n, std::move(e));
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::span<const double> row(std::size_t k) const { return {entries_.data() + k * n_, n_}; }
  std::span<const double> entries() const { return entries_; }

private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> entries_;
};

/// A realized noise vector eta together with the sigma it was drawn with.
class NoiseVector {
public:
  NoiseVector(std::vector<double> values, double sigma) : values_(std::move(values)), sigma_(sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("NoiseVector: sigma must be >= 0");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("NoiseVector: non-finite value");
  }

  static NoiseVector sample(RngStream& stream, std::size_t m, const NoiseModel& model) {
    std::vector<double> v = gaussian_vector(stream, m);
    for (auto& x : v) x *= model.sigma;
    return NoiseVector(std::move(v), model.sigma);
  }

  std::size_t size() const { return values_.size(); }
  double sigma() const { return sigma_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }

private:
  std::vector<double> values_;
  double sigma_;
};

/// m sign bits packed 64 per word, LSB first; bit set <=> sign +1. Pad bits
/// past m are always zero.
class BitCode {
public:
  BitCode() = default;
  explicit BitCode(std::size_t length) : length_(length), words_(word_count(length), 0) {}

  static std::size_t word_count(std::size_t length) { return (length + 63) / 64; }

  /// Takes ownership of packed words; rejects nonzero padding.
  static BitCode from_words(std::size_t length, std::vector<std::uint64_t> words) {
    if (words.size() != word_count(length)) throw std::invalid_argument("BitCode: word count mismatch");
    BitCode c;
    c.length_ = length;
    c.words_ = std::move(words);
    if (length % 64 != 0 && !c.words_.empty() && (c.words_.back() >> (length % 64)) != 0)
      throw std::invalid_argument("BitCode: nonzero tail padding");
    return c;
  }

  std::size_t size() const { return length_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool test(std::size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1u; }
  void set(std::size_t k, bool positive) {
    const std::uint64_t mask = std::uint64_t{1} << (k & 63);
    if (positive)
      words_[k >> 6] |= mask;
    else
      words_[k >> 6] &= ~mask;
  }

  /// Sign value (+1 / -1) of bit k.
  int sign(std::size_t k) const { return test(k) ? 1 : -1; }

  BitCode complement() const {
    BitCode c(*this);
    for (auto& w : c.words_) w = ~w;
    c.clear_tail();
    return c;
  }

  BitCode operator^(const BitCode& other) const {
    if (other.length_ != length_) throw std::invalid_argument("BitCode: length mismatch");
    BitCode c(*this);
    for (std::size_t i = 0; i < words_.size(); ++i) c.words_[i] ^= other.words_[i];
    return c;
  }

  std::size_t popcount() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  friend bool operator==(const BitCode&, const BitCode&) = default;

private:
  void clear_tail() {
    if (length_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (length_ % 64)) - 1;
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Number of positions where the codes differ.
inline std::size_t hamming_count(const BitCode& a, const BitCode& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
  std::size_t total = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) total += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return total;
}

/// Normalized Hamming distance in {0, 1/m, ..., 1}.
inline double hamming(const BitCode& a, const BitCode& b) {
  const std::size_t count = hamming_count(a, b);
  if (a.size() == 0) throw std::invalid_argument("hamming: empty codes");
  return static_cast<double>(count) / static_cast<double>(a.size());
}

/// sgn(Ax).
inline BitCode embed(const SensingMatrix& A, const UnitVector& x) {
  if (x.dim() != A.cols()) throw std::invalid_argument("embed: dimension mismatch");
  BitCode code(A.rows());
  for (std::size_t k = 0; k < A.rows(); ++k) code.set(k, sign_quantize(x.dot(A.row(k))));
  return code;
}

/// sgn(Ax + eta).
inline BitCode embed_noisy(const SensingMatrix& A, const NoiseVector& eta, const UnitVector& x) {
  if (x.dim() != A.cols()) throw std::invalid_argument("embed_noisy: dimension mismatch");
  if (eta.size() != A.rows()) throw std::invalid_argument("embed_noisy: noise length != m");
  BitCode code(A.rows());
  for (std::size_t k = 0; k < A.rows(); ++k) code.set(k, sign_quantize(x.dot(A.row(k)) + eta[k]));
  return code;
}

/// Appends eta_k / sigma to row k, giving an m x (n+1) matrix h with
/// sgn(<h_k, lift(x)>) = sgn(<g_k, x> + eta_k).
inline SensingMatrix augment_matrix(const SensingMatrix& A, const NoiseVector& eta, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("augment_matrix: sigma must be > 0");
  if (eta.size() != A.rows()) throw std::invalid_argument("augment_matrix: noise length != m");
  const std::size_t n1 = A.cols() + 1;
  std::vector<double> e;
  e.reserve(A.rows() * n1);
  for (std::size_t k = 0; k < A.rows(); ++k) {
    const auto r = A.row(k);
    e.insert(e.end(), r.begin(), r.end());
    e.push_back(eta[k] / sigma);
  }
  return SensingMatrix(A.rows(), n1, std::move(e));
}

// Binary dump format: u64 logical length, then ceil(m/64) u64 words, all
// little-endian, pad bits zero.

namespace detail {
inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw std::runtime_error("BitCode: truncated input");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}
} // namespace detail

inline void write_code(std::ostream& out, const BitCode& code) {
  detail::put_u64_le(out, code.size());
  for (auto w : code.words()) detail::put_u64_le(out, w);
}

inline BitCode read_code(std::istream& in) {
  const std::uint64_t length = detail::get_u64_le(in);
  std::vector<std::uint64_t> words(BitCode::word_count(length));
  for (auto& w : words) w = detail::get_u64_le(in);
  return BitCode::from_words(length, std::move(words));
}

} // namespace onebit
