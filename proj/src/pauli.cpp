#include "cartanq/pauli.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cartanq {

namespace {

// Phase exponent of i in the single-site product, indexed by
// (x1<<3)|(z1<<2)|(x2<<1)|z2. Cyclic products (XY, YZ, ZX) give i,
// anti-cyclic ones give -i = i^3.
constexpr std::array<int, 16> kSitePhase = {0, 0, 0, 0, 0, 0, 1, 3, 0, 3, 0, 1, 0, 1, 3, 0};

}  // namespace

PauliString PauliString::single(int n, int site, char letter) {
  if (site < 0 || site >= n) throw std::invalid_argument("PauliString: site out of range");
  std::uint64_t x = 0, z = 0;
  switch (letter) {
    case 'X': x = 1ull << site; break;
    case 'Y': x = 1ull << site; z = 1ull << site; break;
    case 'Z': z = 1ull << site; break;
    case 'I': break;
    default: throw std::invalid_argument(std::string("PauliString: invalid letter '") + letter + "'");
  }
  return PauliString(n, x, z);
}

PauliString PauliString::from_label(std::string_view label) {
  const int n = static_cast<int>(label.size());
  check_sites(n);
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (label[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': x |= 1ull << q; break;
      case 'Y': x |= 1ull << q; z |= 1ull << q; break;
      case 'Z': z |= 1ull << q; break;
      default:
        throw std::invalid_argument(std::string("PauliString: invalid letter '") +
                                    label[static_cast<std::size_t>(q)] + "' in label");
    }
  }
  return PauliString(n, x, z);
}

std::pair<Phase, PauliString> multiply(const PauliString& p, const PauliString& q) {
  p.require_same_sites(q);
  int k = 0;
  std::uint64_t support = (p.x_bits() | p.z_bits()) & (q.x_bits() | q.z_bits());
  while (support) {
    const int site = __builtin_ctzll(support);
    support &= support - 1;
    const int idx = (static_cast<int>(p.x_bit(site)) << 3) | (static_cast<int>(p.z_bit(site)) << 2) |
                    (static_cast<int>(q.x_bit(site)) << 1) | static_cast<int>(q.z_bit(site));
    k += kSitePhase[static_cast<std::size_t>(idx)];
  }
  return {Phase(k), PauliString(p.num_sites(), p.x_bits() ^ q.x_bits(), p.z_bits() ^ q.z_bits())};
}

std::optional<std::pair<Phase, PauliString>> commutator(const PauliString& p, const PauliString& q) {
  if (p.commutes_with(q)) return std::nullopt;
  return multiply(p, q);
}

double PauliSum::max_coeff_distance(const PauliSum& other) const {
  if (other.n_ != n_) throw std::invalid_argument("PauliSum: size mismatch");
  double m = 0;
  for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c - other.coefficient(p)));
  for (const auto& [p, c] : other.terms_) m = std::max(m, std::abs(c - coefficient(p)));
  return m;
}

double inner_product(const PauliSum& a, const PauliSum& b) {
  if (a.num_sites() != b.num_sites()) throw std::invalid_argument("inner_product: size mismatch");
  // Iterate the smaller map; only shared strings contribute.
  const PauliSum& lo = a.size() <= b.size() ? a : b;
  const PauliSum& hi = a.size() <= b.size() ? b : a;
  std::complex<double> s = 0;
  for (const auto& [p, c] : lo.terms()) s += c * hi.coefficient(p);
  return s.real();
}

PauliSum conjugate_by_rotation(double theta, const PauliString& k, const PauliSum& a) {
  if (k.num_sites() != a.num_sites())
    throw std::invalid_argument("conjugate_by_rotation: size mismatch");
  const double c2 = std::cos(2 * theta);
  const double s2 = std::sin(2 * theta);
  PauliSum out(a.num_sites());
  for (const auto& [p, coeff] : a.terms()) {
    if (k.commutes_with(p)) {
      out.add(p, coeff);
      continue;
    }
    auto [ph, r] = multiply(k, p);
    out.add(p, c2 * coeff);
    // i k p = i^{ph+1} r; for Hermitian k,p the factor is exactly +/-1.
    out.add(r, s2 * coeff * (ph * Phase(1)).value());
  }
  return out;
}

}  // namespace cartanq
