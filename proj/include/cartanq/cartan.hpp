#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cartanq/closure.hpp"
#include "cartanq/pauli.hpp"

namespace cartanq {

/// The three inequivalent involution families of su(2^n), restricted to
/// conjugation by a single Pauli string B:
///   AI   : theta(g) = -B g^T B, y_count(B) even
///   AII  : theta(g) = -B g^T B, y_count(B) odd
///   AIII : theta(g) =  B g B
enum class InvolutionClass { AI, AII, AIII };

std::string to_string(InvolutionClass cls);

struct InvolutionDescriptor {
  InvolutionClass cls = InvolutionClass::AI;
  PauliString b;
};

/// Sign s with theta(P) = s P. Every single-string involution maps each
/// basis string to +/- itself, so the split is automatic.
int apply_involution(const InvolutionDescriptor& desc, const PauliString& p);

/// Searches AI with B = identity, then AI/AII and AIII over single-site
/// strings, then over g's basis, for a theta with theta(P) = -P on every
/// Hamiltonian term. Throws if the pool is exhausted.
InvolutionDescriptor find_involution(const HamiltonianSpec& h, const AlgebraBasis& g);

struct CartanSplit {
  AlgebraBasis g;
  InvolutionDescriptor involution;
  std::vector<PauliString> k_basis;  // theta = +1, canonical order
  std::vector<PauliString> m_basis;  // theta = -1, canonical order
  std::vector<PauliString> h_basis;  // filled by cartan_subalgebra
  std::unordered_map<PauliString, int, PauliStringHash> m_index;

  int n() const { return g.n; }
  bool in_m(const PauliString& p) const { return m_index.count(p) != 0; }
};

/// Partitions g by involution sign and checks the decomposition conditions:
/// H subset of m and the [k,k] in k, [m,m] in k, [k,m] in m relations
/// (exhaustive below 1e6 pairs, seeded sampling of 1e5 pairs above).
/// h_basis is left empty; fill it with cartan_subalgebra.
CartanSplit cartan_split(const AlgebraBasis& g, const InvolutionDescriptor& desc,
                         const HamiltonianSpec& h);

/// Greedy maximal Abelian subalgebra of m: start from m_basis[seed_index],
/// append every later (canonical-order) string commuting with everything
/// appended so far.
std::vector<PauliString> cartan_subalgebra(const CartanSplit& split, int seed_index = 0);

/// Index of the first weight-1 Z string in m_basis, or -1. Used by the
/// --h-seed z policy so TFXY lands on h = span{Z_i}.
int z_seed_index(const CartanSplit& split);

}  // namespace cartanq
