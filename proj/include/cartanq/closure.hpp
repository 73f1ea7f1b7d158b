#pragma once

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cartanq/models.hpp"
#include "cartanq/pauli.hpp"

namespace cartanq {

/// Basis of the Hamiltonian algebra g(H): distinct signless strings, closed
/// under commutation. Element order is BFS discovery order with canonical
/// sorting inside each level, so it is deterministic and independent of the
/// generator input order.
struct AlgebraBasis {
  int n = 0;
  std::vector<PauliString> elements;
  std::unordered_map<PauliString, int, PauliStringHash> index;

  int dimension() const { return static_cast<int>(elements.size()); }
  bool contains(const PauliString& p) const { return index.count(p) != 0; }
  int position(const PauliString& p) const {
    auto it = index.find(p);
    return it == index.end() ? -1 : it->second;
  }
};

struct CapExceededError : std::runtime_error {
  CapExceededError(int reached_size, int cap_value, std::string msg)
      : std::runtime_error(std::move(msg)), reached(reached_size), cap(cap_value) {}
  int reached;
  int cap;
};

inline int default_closure_cap(int n) { return 16 * n * n; }

/// Commutator closure of H's Pauli terms (plus any structural extra seeds).
/// Throws CapExceededError once the basis would exceed `cap`.
AlgebraBasis generate_algebra(const HamiltonianSpec& h, int cap,
                              const std::vector<PauliString>& extra_seeds = {});

/// Closed-form |g| for the nearest-neighbor families: n(n-1) for XY,
/// n(2n-1) for TFIM/TFXY, 4^(n-1)-4 for Heisenberg (valid for n >= 3; at
/// n = 2 the Heisenberg generators are mutually commuting and the closure
/// is 3-dimensional instead).
long long expected_dimension(ModelKind kind, int n);

struct StructureReport {
  bool ok = false;
  std::vector<PauliString> missing;     // predicted but absent
  std::vector<PauliString> unexpected;  // present but not predicted
};

/// Compares a generated basis against the model's predicted string set,
/// constructed independently from the hat-notation patterns.
StructureReport verify_structure(const AlgebraBasis& basis, ModelKind kind);

/// A_i Z_{i+1} ... Z_{j-1} B_j on sites i < j (0-based).
PauliString hat_string(int n, int i, int j, char a, char b);

}  // namespace cartanq
