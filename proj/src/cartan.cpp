#include "cartanq/cartan.hpp"

#include <algorithm>
#include <sstream>

#include "cartanq/rng.hpp"

namespace cartanq {

namespace {

bool negates_every_term(const InvolutionDescriptor& desc, const HamiltonianSpec& h) {
  for (const auto& [p, c] : h.terms())
    if (apply_involution(desc, p) != -1) return false;
  return true;
}

InvolutionClass transpose_class(const PauliString& b) {
  return b.y_count() % 2 == 0 ? InvolutionClass::AI : InvolutionClass::AII;
}

struct SplitCheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One Eq.-3 relation on a pair of basis lists: every nonzero commutator of
// lhs x rhs must land in `target`.
void check_relation(const std::vector<PauliString>& lhs, const std::vector<PauliString>& rhs,
                    const std::unordered_map<PauliString, int, PauliStringHash>& target,
                    const char* name, Xoshiro256pp* sampler, std::size_t samples) {
  auto verify_pair = [&](const PauliString& a, const PauliString& b) {
    auto comm = commutator(a, b);
    if (comm && target.count(comm->second) == 0) {
      std::ostringstream msg;
      msg << "cartan_split: commutation relation " << name << " violated by [" << a.label() << ", "
          << b.label() << "] -> " << comm->second.label()
          << " (the involution is not an automorphism of g)";
      throw SplitCheckError(msg.str());
    }
  };
  if (lhs.empty() || rhs.empty()) return;
  if (sampler == nullptr) {
    for (const auto& a : lhs)
      for (const auto& b : rhs) verify_pair(a, b);
  } else {
    for (std::size_t s = 0; s < samples; ++s) {
      const auto& a = lhs[static_cast<std::size_t>(sampler->next() % lhs.size())];
      const auto& b = rhs[static_cast<std::size_t>(sampler->next() % rhs.size())];
      verify_pair(a, b);
    }
  }
}

}  // namespace

std::string to_string(InvolutionClass cls) {
  switch (cls) {
    case InvolutionClass::AI: return "AI";
    case InvolutionClass::AII: return "AII";
    case InvolutionClass::AIII: return "AIII";
  }
  return "?";
}

int apply_involution(const InvolutionDescriptor& desc, const PauliString& p) {
  desc.b.require_same_sites(p);
  const int conj_sign = desc.b.commutes_with(p) ? 1 : -1;
  if (desc.cls == InvolutionClass::AIII) return conj_sign;
  const int transpose_sign = (p.y_count() % 2 == 0) ? 1 : -1;
  return -transpose_sign * conj_sign;
}

InvolutionDescriptor find_involution(const HamiltonianSpec& h, const AlgebraBasis& g) {
  const int n = h.num_sites();
  std::vector<InvolutionDescriptor> pool;
  pool.push_back({InvolutionClass::AI, PauliString::identity(n)});

  std::vector<PauliString> single_site;
  for (int site = 0; site < n; ++site)
    for (char letter : {'X', 'Y', 'Z'}) single_site.push_back(PauliString::single(n, site, letter));

  for (const auto& b : single_site) pool.push_back({transpose_class(b), b});
  for (const auto& b : single_site) pool.push_back({InvolutionClass::AIII, b});
  for (const auto& b : g.elements) pool.push_back({transpose_class(b), b});
  for (const auto& b : g.elements) pool.push_back({InvolutionClass::AIII, b});

  for (const auto& desc : pool)
    if (negates_every_term(desc, h)) return desc;

  std::ostringstream msg;
  msg << "find_involution: no single-string involution with theta(H) = -H in a pool of "
      << pool.size() << " candidates";
  throw std::runtime_error(msg.str());
}

CartanSplit cartan_split(const AlgebraBasis& g, const InvolutionDescriptor& desc,
                         const HamiltonianSpec& h) {
  CartanSplit split;
  split.g = g;
  split.involution = desc;
  for (const auto& p : g.elements) {
    (apply_involution(desc, p) == 1 ? split.k_basis : split.m_basis).push_back(p);
  }
  std::sort(split.k_basis.begin(), split.k_basis.end(), PauliStringLess{});
  std::sort(split.m_basis.begin(), split.m_basis.end(), PauliStringLess{});
  for (std::size_t i = 0; i < split.m_basis.size(); ++i)
    split.m_index.emplace(split.m_basis[i], static_cast<int>(i));

  for (const auto& [p, c] : h.terms())
    if (!split.in_m(p))
      throw std::runtime_error("cartan_split: Hamiltonian term " + p.label() +
                               " is not in m (theta does not negate H)");

  std::unordered_map<PauliString, int, PauliStringHash> k_index;
  for (std::size_t i = 0; i < split.k_basis.size(); ++i)
    k_index.emplace(split.k_basis[i], static_cast<int>(i));

  const std::size_t kk = split.k_basis.size() * split.k_basis.size();
  const std::size_t mm = split.m_basis.size() * split.m_basis.size();
  const std::size_t km = split.k_basis.size() * split.m_basis.size();
  const bool exhaustive = kk + mm + km < 1'000'000;
  Xoshiro256pp sampler(0x5eedu);
  Xoshiro256pp* rng = exhaustive ? nullptr : &sampler;
  const std::size_t samples = 100'000;
  check_relation(split.k_basis, split.k_basis, k_index, "[k,k] in k", rng, samples / 3);
  check_relation(split.m_basis, split.m_basis, k_index, "[m,m] in k", rng, samples / 3);
  check_relation(split.k_basis, split.m_basis, split.m_index, "[k,m] in m", rng, samples / 3);

  return split;
}

std::vector<PauliString> cartan_subalgebra(const CartanSplit& split, int seed_index) {
  if (split.m_basis.empty()) throw std::invalid_argument("cartan_subalgebra: empty m");
  if (seed_index < 0 || seed_index >= static_cast<int>(split.m_basis.size()))
    throw std::invalid_argument("cartan_subalgebra: seed index out of range");

  std::vector<PauliString> h;
  h.push_back(split.m_basis[static_cast<std::size_t>(seed_index)]);
  for (const auto& candidate : split.m_basis) {
    if (candidate == h.front()) continue;
    bool commutes_all = true;
    for (const auto& member : h)
      if (!candidate.commutes_with(member)) {
        commutes_all = false;
        break;
      }
    if (commutes_all) h.push_back(candidate);
  }
  std::sort(h.begin(), h.end(), PauliStringLess{});
  return h;
}

int z_seed_index(const CartanSplit& split) {
  for (std::size_t i = 0; i < split.m_basis.size(); ++i) {
    const auto& p = split.m_basis[i];
    if (p.weight() == 1 && p.x_bits() == 0) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace cartanq
