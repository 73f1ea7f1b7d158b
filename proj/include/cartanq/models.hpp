#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cartanq/pauli.hpp"

namespace cartanq {

enum class ModelKind { XY, TFIM, TFXY, Heisenberg, File };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Parameters for the built-in nearest-neighbor open-chain families.
///
/// Coupling vectors may be left empty to mean "all ones". Which vectors a
/// model reads:
///   XY         : a_i X X + b_i Y Y              (n-1 bonds each)
///   TFIM       : a_i Z Z + c_i X_i              (bonds, sites)
///   TFXY       : a_i X X + b_i Y Y + c_i Z_i    (c drawn ~N(0,sigma^2) when empty)
///   Heisenberg : a_i X X + b_i Y Y + c_i Z Z
struct ModelParams {
  ModelKind kind = ModelKind::TFXY;
  int n = 2;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  bool normalize = false;
};

/// A built Hamiltonian plus the strings that must seed the algebra closure.
/// closure_seeds includes every structural term of the family even when its
/// coefficient is exactly zero (e.g. TFXY field terms at sigma = 0), so the
/// generated algebra does not shrink at special coupling values.
struct Model {
  HamiltonianSpec hamiltonian;
  std::vector<PauliString> closure_seeds;
  ModelKind kind = ModelKind::File;
};

Model build_model(const ModelParams& params);

/// H -> H / sqrt(tr(H^2)) with the raw (unnormalized) trace, i.e. each
/// coefficient is divided by sqrt(2^n * sum_j H_j^2). Throws on zero input.
HamiltonianSpec normalize_hamiltonian(const HamiltonianSpec& h);

/// Parse the JSON Hamiltonian document
///   {"n": 3, "terms": [{"pauli": "ZZI", "coeff": 1.0}, ...]}
/// Rejects non-Pauli letters, length mismatches, non-finite coefficients and
/// empty term lists, reporting the offending term index and field.
HamiltonianSpec parse_hamiltonian_file(std::istream& in);
HamiltonianSpec parse_hamiltonian_text(const std::string& text);

}  // namespace cartanq
