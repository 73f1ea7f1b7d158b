#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cartanq/optimizer.hpp"
#include "cartanq/pauli.hpp"

namespace cartanq {

enum class GateKind { CNOT, RX, RY, RZ, H, S, SDG };

std::string to_string(GateKind kind);

struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;        // CNOT control, otherwise the target site
  int q1 = -1;       // CNOT target
  double angle = 0;  // RX/RY/RZ only

  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, 0}; }
  static Gate rx(int site, double angle) { return {GateKind::RX, site, -1, angle}; }
  static Gate ry(int site, double angle) { return {GateKind::RY, site, -1, angle}; }
  static Gate rz(int site, double angle) { return {GateKind::RZ, site, -1, angle}; }
  static Gate h(int site) { return {GateKind::H, site, -1, 0}; }
  static Gate s(int site) { return {GateKind::S, site, -1, 0}; }
  static Gate sdg(int site) { return {GateKind::SDG, site, -1, 0}; }
};

/// Gate list in left-to-right application order: gates[0] acts first.
struct GateCircuit {
  int n = 0;
  std::vector<Gate> gates;
  std::string source;                 // "K", "expH", "Kdagger", "U(t)", ...
  std::pair<int, int> h_block{-1, -1};  // [begin,end) gate range of the e^{-ith} segment

  explicit GateCircuit(int sites = 0) : n(sites) {}

  void push(const Gate& g) {
    if (g.kind == GateKind::CNOT) ++cnots_;
    gates.push_back(g);
  }
  int cnots() const { return cnots_; }

 private:
  int cnots_ = 0;
};

/// Exact CNOT tally (spec operation; the circuit also caches it).
int cnot_count(const GateCircuit& c);

/// Circuit for e^{-i angle P}: basis change, CNOT ladder, RZ(2 angle),
/// unladder, unbasis. 2 (weight-1) CNOTs. Throws on the identity string.
GateCircuit pauli_rotation_circuit(double angle, const PauliString& p);
void append_pauli_rotation(GateCircuit& circuit, double angle, const PauliString& p);

/// Abstract product of Pauli exponentials: entry (P, theta) means
/// e^{+i theta P}, and the list is the matrix product in ascending order
/// (entry 0 leftmost).
struct RotationLayer {
  int n = 0;
  std::vector<std::pair<PauliString, double>> factors;
};

/// Appends gates realizing the layer's product unitary.
void append_rotation_product(GateCircuit& circuit, const RotationLayer& layer);

enum class HatFlavor { YX, XY };

/// Euler split of a two-arrow product in the su(2) spanned by the hat
/// strings on (i, j, j+1):
///   e^{i alpha A_i B_j} e^{i beta A_i B_{j+1}}
///     = e^{i a A_j B_{j+1}} e^{i b A_i B_j} e^{i c A_j B_{j+1}}
/// with (A,B) = (Y,X) or (X,Y). Gimbal ties resolve to c = 0.
std::array<double, 3> euler_rocket(double alpha, double beta, int i, int j, HatFlavor flavor);

/// Triangle prod_j e^{i a_j hat(A_i B_j)} (targets ascending) rewritten as a
/// zigzag of nearest-neighbor arrows; the unitary is preserved.
RotationLayer triangle_to_zigzag(const RotationLayer& triangle);

/// Zigzag -> zagzig (the flip lemma); unitary preserved.
RotationLayer flip_zigzag(const RotationLayer& zigzag);

/// Product of zigzags (anchors ascending) -> pile of zigs; unitary preserved.
RotationLayer pile_zigzags(const RotationLayer& zigzags);

/// Factor orderings for the TFXY k basis (0-based sites):
/// triangles (red YX anchors ascending, then green XY), and the pile-of-zigs
/// ansatz whose factor count equals |k| = n(n-1).
std::vector<PauliString> tfxy_triangle_factors(int n);
std::vector<PauliString> tfxy_pile_factors(int n);

/// True when `factors` is exactly the TFXY k basis as a set.
bool matches_tfxy_k(const std::vector<PauliString>& factors, int n);

/// Compress a TFXY K factorization (triangle or pile order) to the
/// n(n-1)-CNOT circuit via the zigzag/pile rewrites plus 2-CNOT pair blocks.
/// On pattern mismatch, lowers the raw product and tags the source
/// "K-raw-fallback" (a warning is printed).
GateCircuit reduce_tfxy_k(const KFactorization& k_fact, int n);

/// Raw K circuit: each factor lowered independently (Fig. 3(b) shape).
GateCircuit raw_k_circuit(const KFactorization& k_fact, int n);

struct SynthesisOptions {
  bool reduce = false;  // use the TFXY compressed K when the basis matches
};

/// Full evolution circuit for U(t) = K e^{-ith} K^dag. Only the h-block
/// rotation angles depend on t.
GateCircuit synthesize_evolution(const DecompositionResult& result, int n, double t,
                                 const SynthesisOptions& options = {});

/// OpenQASM 2.0 text (qelib1 gate names; q[s] is chain site s).
void write_qasm(const GateCircuit& circuit, std::ostream& out);
std::string to_qasm(const GateCircuit& circuit);

/// JSON gate-list document mirroring GateCircuit.
std::string to_circuit_json(const GateCircuit& circuit);

}  // namespace cartanq
