#include "cartanq/closure.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

namespace cartanq {

namespace {

void sort_canonical(std::vector<PauliString>& v) { std::sort(v.begin(), v.end(), PauliStringLess{}); }

std::set<PauliString, PauliStringLess> predicted_basis(ModelKind kind, int n) {
  std::set<PauliString, PauliStringLess> out;
  switch (kind) {
    case ModelKind::XY:
      // XX/YY hats at odd distance, XY/YX hats at even distance.
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if ((j - i) % 2 == 1) {
            out.insert(hat_string(n, i, j, 'X', 'X'));
            out.insert(hat_string(n, i, j, 'Y', 'Y'));
          } else {
            out.insert(hat_string(n, i, j, 'X', 'Y'));
            out.insert(hat_string(n, i, j, 'Y', 'X'));
          }
        }
      break;
    case ModelKind::TFXY:
      for (int i = 0; i < n; ++i) out.insert(PauliString::single(n, i, 'Z'));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (const char* ab : {"XX", "YY", "XY", "YX"})
            out.insert(hat_string(n, i, j, ab[0], ab[1]));
      break;
    case ModelKind::TFIM:
      // Same algebra as TFXY after the global X<->Z relabeling that maps the
      // ZZ-coupling convention onto the XX one: X fields plus X-dressed hats.
      for (int i = 0; i < n; ++i) out.insert(PauliString::single(n, i, 'X'));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (const char* ab : {"ZZ", "YY", "ZY", "YZ"}) {
            std::string label(static_cast<std::size_t>(n), 'I');
            label[static_cast<std::size_t>(i)] = ab[0];
            label[static_cast<std::size_t>(j)] = ab[1];
            for (int q = i + 1; q < j; ++q) label[static_cast<std::size_t>(q)] = 'X';
            out.insert(PauliString::from_label(label));
          }
      break;
    case ModelKind::Heisenberg: {
      // Strings whose X, Y and Z counts are pairwise of equal parity, minus
      // the identity and the three uniform strings.
      const long long total = 1ll << (2 * n);
      for (long long code = 1; code < total; ++code) {
        std::uint64_t x = 0, z = 0;
        int cx = 0, cy = 0, cz = 0;
        long long c = code;
        for (int q = 0; q < n; ++q, c >>= 2) {
          switch (c & 3) {
            case 0: break;
            case 1: x |= 1ull << q; ++cx; break;
            case 2: x |= 1ull << q; z |= 1ull << q; ++cy; break;
            case 3: z |= 1ull << q; ++cz; break;
          }
        }
        if (((cx + cy) % 2) || ((cx + cz) % 2) || ((cy + cz) % 2)) continue;
        if (cx == n || cy == n || cz == n) continue;
        out.insert(PauliString(n, x, z));
      }
      break;
    }
    case ModelKind::File:
      throw std::invalid_argument("verify_structure: no prediction for file models");
  }
  return out;
}

}  // namespace

PauliString hat_string(int n, int i, int j, char a, char b) {
  if (i < 0 || j >= n || i >= j) throw std::invalid_argument("hat_string: need 0 <= i < j < n");
  std::string label(static_cast<std::size_t>(n), 'I');
  label[static_cast<std::size_t>(i)] = a;
  label[static_cast<std::size_t>(j)] = b;
  for (int q = i + 1; q < j; ++q) label[static_cast<std::size_t>(q)] = 'Z';
  return PauliString::from_label(label);
}

AlgebraBasis generate_algebra(const HamiltonianSpec& h, int cap,
                              const std::vector<PauliString>& extra_seeds) {
  if (h.empty()) throw std::invalid_argument("generate_algebra: zero Hamiltonian");

  AlgebraBasis basis;
  basis.n = h.num_sites();

  auto overflow = [&](std::size_t size) {
    std::ostringstream msg;
    msg << "algebra closure exceeded cap " << cap << " (reached " << size
        << " elements); the model's algebra likely grows exponentially "
           "(Heisenberg-like or long-range couplings) -- raise --cap to override";
    throw CapExceededError(static_cast<int>(size), cap, msg.str());
  };

  std::vector<PauliString> level;
  for (const auto& [p, c] : h.terms()) level.push_back(p);
  for (const auto& p : extra_seeds) {
    if (p.num_sites() != basis.n) throw std::invalid_argument("generate_algebra: seed size mismatch");
    level.push_back(p);
  }
  sort_canonical(level);
  level.erase(std::unique(level.begin(), level.end()), level.end());
  if (static_cast<int>(level.size()) > cap) overflow(level.size());
  for (const auto& p : level) {
    basis.index.emplace(p, basis.dimension());
    basis.elements.push_back(p);
  }

  while (!level.empty()) {
    std::unordered_set<PauliString, PauliStringHash> discovered;
    for (const auto& p : level) {
      for (const auto& q : basis.elements) {
        auto comm = commutator(p, q);
        if (!comm) continue;
        const PauliString& r = comm->second;
        if (!basis.contains(r)) discovered.insert(r);
      }
    }
    level.assign(discovered.begin(), discovered.end());
    sort_canonical(level);
    if (basis.dimension() + static_cast<int>(level.size()) > cap)
      overflow(basis.elements.size() + level.size());
    for (const auto& p : level) {
      basis.index.emplace(p, basis.dimension());
      basis.elements.push_back(p);
    }
  }
  return basis;
}

long long expected_dimension(ModelKind kind, int n) {
  if (n < 2) throw std::invalid_argument("expected_dimension: need n >= 2");
  switch (kind) {
    case ModelKind::XY: return static_cast<long long>(n) * (n - 1);
    case ModelKind::TFIM:
    case ModelKind::TFXY: return static_cast<long long>(n) * (2 * n - 1);
    case ModelKind::Heisenberg: return (1ll << (2 * (n - 1))) - 4;
    case ModelKind::File: break;
  }
  throw std::invalid_argument("expected_dimension: no closed form for file models");
}

StructureReport verify_structure(const AlgebraBasis& basis, ModelKind kind) {
  const auto predicted = predicted_basis(kind, basis.n);
  StructureReport report;
  for (const auto& p : predicted)
    if (!basis.contains(p)) report.missing.push_back(p);
  for (const auto& p : basis.elements)
    if (predicted.count(p) == 0) report.unexpected.push_back(p);
  report.ok = report.missing.empty() && report.unexpected.empty();
  return report;
}

}  // namespace cartanq
