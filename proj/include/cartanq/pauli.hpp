#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cartanq {

/// Power of the imaginary unit, i^k with k mod 4. Tracks the scalar phases
/// that Pauli string products produce; the strings themselves stay signless.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int k) : k_(((k % 4) + 4) % 4) {}

  constexpr int exponent() const { return k_; }

  std::complex<double> value() const {
    switch (k_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  friend constexpr Phase operator*(Phase a, Phase b) { return Phase(a.k_ + b.k_); }
  friend constexpr bool operator==(Phase a, Phase b) { return a.k_ == b.k_; }
  friend constexpr bool operator!=(Phase a, Phase b) { return a.k_ != b.k_; }

 private:
  int k_ = 0;
};

/// Signless n-qubit Pauli string in the symplectic bit encoding.
///
/// Site 0 is the leftmost letter of the printed label and the most
/// significant qubit of the dense Kronecker representation. Per site,
/// (x,z) = (0,0) is I, (1,0) is X, (1,1) is Y and (0,1) is Z.
class PauliString {
 public:
  static constexpr int kMaxSites = 64;

  PauliString() = default;

  PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits) : n_(n), x_(x_bits), z_(z_bits) {
    check_sites(n);
    const std::uint64_t m = mask(n);
    if ((x_ & ~m) != 0 || (z_ & ~m) != 0)
      throw std::invalid_argument("PauliString: bits set beyond site count");
  }

  static PauliString identity(int n) { return PauliString(n, 0, 0); }

  /// Single non-identity letter ('X','Y','Z') at `site`, identity elsewhere.
  static PauliString single(int n, int site, char letter);

  /// Parse a label such as "XZY" or "IIZ"; the string length fixes n.
  static PauliString from_label(std::string_view label);

  int num_sites() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }

  bool x_bit(int site) const { return (x_ >> site) & 1u; }
  bool z_bit(int site) const { return (z_ >> site) & 1u; }

  char letter(int site) const {
    const bool x = x_bit(site), z = z_bit(site);
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }

  std::string label() const {
    std::string s(static_cast<std::size_t>(n_), 'I');
    for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = letter(q);
    return s;
  }

  /// Number of non-identity sites.
  int weight() const { return __builtin_popcountll(x_ | z_); }

  /// Number of Y letters; the transpose sign of the string is (-1)^y_count.
  int y_count() const { return __builtin_popcountll(x_ & z_); }

  bool is_identity() const { return (x_ | z_) == 0; }

  /// True iff the symplectic form x_P.z_Q + z_P.x_Q is even.
  bool commutes_with(const PauliString& other) const {
    require_same_sites(other);
    const int par = __builtin_popcountll(x_ & other.z_) + __builtin_popcountll(z_ & other.x_);
    return (par & 1) == 0;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend bool operator!=(const PauliString& a, const PauliString& b) { return !(a == b); }

  void require_same_sites(const PauliString& other) const {
    if (n_ != other.n_)
      throw std::invalid_argument("PauliString: size mismatch (" + std::to_string(n_) + " vs " +
                                  std::to_string(other.n_) + ")");
  }

 private:
  static std::uint64_t mask(int n) { return n == 64 ? ~0ull : ((1ull << n) - 1); }
  static void check_sites(int n) {
    if (n < 1 || n > kMaxSites) throw std::invalid_argument("PauliString: unsupported site count");
  }

  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(p.num_sites());
    for (std::uint64_t w : {p.x_bits(), p.z_bits()}) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Canonical order: weight first, then site letters left to right with
/// I < X < Y < Z. Used everywhere a PauliSum or basis is iterated.
struct PauliStringLess {
  bool operator()(const PauliString& a, const PauliString& b) const {
    const int wa = a.weight(), wb = b.weight();
    if (wa != wb) return wa < wb;
    for (int q = 0; q < a.num_sites(); ++q) {
      const int ra = rank(a, q), rb = rank(b, q);
      if (ra != rb) return ra < rb;
    }
    return false;
  }

  static int rank(const PauliString& p, int site) {
    const bool x = p.x_bit(site), z = p.z_bit(site);
    return x ? (z ? 2 : 1) : (z ? 3 : 0);  // I=0 X=1 Y=2 Z=3
  }
};

/// P*Q = i^ph * R with R signless; R's bits are the XOR of the inputs'.
std::pair<Phase, PauliString> multiply(const PauliString& p, const PauliString& q);

/// [P,Q] up to the scalar factor 2: nullopt when the strings commute,
/// otherwise the (phase, string) of the product PQ.
std::optional<std::pair<Phase, PauliString>> commutator(const PauliString& p, const PauliString& q);

inline bool commutes(const PauliString& p, const PauliString& q) { return p.commutes_with(q); }

/// Real-weighted (generally complex-weighted) sum of Pauli strings with
/// canonical term order. A HamiltonianSpec is a PauliSum whose coefficients
/// are all real.
class PauliSum {
 public:
  using Coeff = std::complex<double>;
  using TermMap = std::map<PauliString, Coeff, PauliStringLess>;

  explicit PauliSum(int n) : n_(n) {
    if (n < 1 || n > PauliString::kMaxSites)
      throw std::invalid_argument("PauliSum: unsupported site count");
  }

  int num_sites() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Accumulates; entries that become exactly zero are dropped.
  void add(const PauliString& p, Coeff c) {
    if (p.num_sites() != n_) throw std::invalid_argument("PauliSum: term size mismatch");
    if (c == Coeff{}) return;
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff{}) terms_.erase(it);
    }
  }

  void add(std::string_view label, Coeff c) { add(PauliString::from_label(label), c); }

  Coeff coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  bool contains(const PauliString& p) const { return terms_.count(p) != 0; }

  const TermMap& terms() const { return terms_; }

  PauliSum scaled(Coeff s) const {
    PauliSum out(n_);
    for (const auto& [p, c] : terms_) out.add(p, c * s);
    return out;
  }

  PauliSum& operator+=(const PauliSum& other) {
    if (other.n_ != n_) throw std::invalid_argument("PauliSum: size mismatch");
    for (const auto& [p, c] : other.terms_) add(p, c);
    return *this;
  }

  /// sum of |coeff|^2, equal to <A,A> in the normalized inner product.
  double norm2() const {
    double s = 0;
    for (const auto& [p, c] : terms_) s += std::norm(c);
    return s;
  }

  /// Largest |coefficient| difference against another sum.
  double max_coeff_distance(const PauliSum& other) const;

  bool coefficients_real(double tol = 0.0) const {
    for (const auto& [p, c] : terms_)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }

 private:
  int n_;
  TermMap terms_;
};

/// HamiltonianSpec: a PauliSum with real coefficients (Eq.-of-motion input).
using HamiltonianSpec = PauliSum;

/// tr(AB)/2^n for Hermitian sums with real coefficients, so <P,P> = 1 for
/// any single string. Symmetric and bilinear.
double inner_product(const PauliSum& a, const PauliSum& b);

/// e^{i theta k} A e^{-i theta k}, evaluated exactly term by term:
/// commuting terms pass through, anticommuting terms rotate in the
/// (p, i k p) plane with angle 2 theta.
PauliSum conjugate_by_rotation(double theta, const PauliString& k, const PauliSum& a);

}  // namespace cartanq
