#include "cartanq/models.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cartanq/rng.hpp"

namespace cartanq {

namespace {

using json = nlohmann::json;

std::vector<double> resolve_couplings(const std::vector<double>& given, std::size_t want,
                                      const char* what) {
  if (given.empty()) return std::vector<double>(want, 1.0);
  if (given.size() != want) {
    std::ostringstream msg;
    msg << "build_model: expected " << want << " " << what << " coefficients, got " << given.size();
    throw std::invalid_argument(msg.str());
  }
  return given;
}

PauliString bond(int n, int site, char left, char right) {
  std::string label(static_cast<std::size_t>(n), 'I');
  label[static_cast<std::size_t>(site)] = left;
  label[static_cast<std::size_t>(site) + 1] = right;
  return PauliString::from_label(label);
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::XY: return "xy";
    case ModelKind::TFIM: return "tfim";
    case ModelKind::TFXY: return "tfxy";
    case ModelKind::Heisenberg: return "heisenberg";
    case ModelKind::File: return "file";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "xy") return ModelKind::XY;
  if (name == "tfim") return ModelKind::TFIM;
  if (name == "tfxy") return ModelKind::TFXY;
  if (name == "heisenberg") return ModelKind::Heisenberg;
  if (name == "file") return ModelKind::File;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

Model build_model(const ModelParams& params) {
  const int n = params.n;
  if (n < 2) throw std::invalid_argument("build_model: need n >= 2");
  if (params.sigma < 0) throw std::invalid_argument("build_model: sigma must be >= 0");
  const std::size_t bonds = static_cast<std::size_t>(n - 1);
  const std::size_t sites = static_cast<std::size_t>(n);

  Model model;
  model.kind = params.kind;
  HamiltonianSpec h(n);
  auto put = [&](const PauliString& p, double coeff) {
    model.closure_seeds.push_back(p);
    if (coeff != 0.0) h.add(p, coeff);
  };

  switch (params.kind) {
    case ModelKind::XY: {
      const auto a = resolve_couplings(params.a, bonds, "XX bond");
      const auto b = resolve_couplings(params.b, bonds, "YY bond");
      for (int i = 0; i + 1 < n; ++i) {
        put(bond(n, i, 'X', 'X'), a[static_cast<std::size_t>(i)]);
        put(bond(n, i, 'Y', 'Y'), b[static_cast<std::size_t>(i)]);
      }
      break;
    }
    case ModelKind::TFIM: {
      // ZZ couplings with a transverse X field, the convention of the
      // two-site walkthrough {ZZ, IX, XI}.
      const auto a = resolve_couplings(params.a, bonds, "ZZ bond");
      const auto c = resolve_couplings(params.c, sites, "X field");
      for (int i = 0; i + 1 < n; ++i) put(bond(n, i, 'Z', 'Z'), a[static_cast<std::size_t>(i)]);
      for (int i = 0; i < n; ++i) put(PauliString::single(n, i, 'X'), c[static_cast<std::size_t>(i)]);
      break;
    }
    case ModelKind::TFXY: {
      const auto a = resolve_couplings(params.a, bonds, "XX bond");
      const auto b = resolve_couplings(params.b, bonds, "YY bond");
      std::vector<double> c = params.c;
      if (c.empty()) {
        c.assign(sites, 0.0);
        Xoshiro256pp rng(params.seed);
        for (auto& v : c) v = rng.normal(0.0, params.sigma);
      } else if (c.size() != sites) {
        throw std::invalid_argument("build_model: expected n Z-field coefficients");
      }
      for (int i = 0; i + 1 < n; ++i) {
        put(bond(n, i, 'X', 'X'), a[static_cast<std::size_t>(i)]);
        put(bond(n, i, 'Y', 'Y'), b[static_cast<std::size_t>(i)]);
      }
      for (int i = 0; i < n; ++i) put(PauliString::single(n, i, 'Z'), c[static_cast<std::size_t>(i)]);
      break;
    }
    case ModelKind::Heisenberg: {
      const auto a = resolve_couplings(params.a, bonds, "XX bond");
      const auto b = resolve_couplings(params.b, bonds, "YY bond");
      const auto c = resolve_couplings(params.c, bonds, "ZZ bond");
      for (int i = 0; i + 1 < n; ++i) {
        put(bond(n, i, 'X', 'X'), a[static_cast<std::size_t>(i)]);
        put(bond(n, i, 'Y', 'Y'), b[static_cast<std::size_t>(i)]);
        put(bond(n, i, 'Z', 'Z'), c[static_cast<std::size_t>(i)]);
      }
      break;
    }
    case ModelKind::File:
      throw std::invalid_argument("build_model: file models come from parse_hamiltonian_file");
  }

  if (h.empty()) throw std::invalid_argument("build_model: zero Hamiltonian");
  if (params.normalize) model.hamiltonian = normalize_hamiltonian(h);
  else model.hamiltonian = h;
  return model;
}

HamiltonianSpec normalize_hamiltonian(const HamiltonianSpec& h) {
  if (h.empty()) throw std::invalid_argument("normalize_hamiltonian: zero Hamiltonian");
  double sum_sq = 0;
  for (const auto& [p, c] : h.terms()) sum_sq += std::norm(c);
  const double scale = 1.0 / std::sqrt(std::ldexp(sum_sq, h.num_sites()));
  return h.scaled(scale);
}

HamiltonianSpec parse_hamiltonian_file(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("hamiltonian file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("terms"))
    throw std::runtime_error("hamiltonian file: expected object with \"n\" and \"terms\"");
  if (!doc["n"].is_number_integer())
    throw std::runtime_error("hamiltonian file: \"n\" must be an integer");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > PauliString::kMaxSites)
    throw std::runtime_error("hamiltonian file: unsupported qubit count");
  if (!doc["terms"].is_array()) throw std::runtime_error("hamiltonian file: \"terms\" must be an array");

  HamiltonianSpec h(n);
  std::size_t idx = 0;
  for (const auto& term : doc["terms"]) {
    const std::string where = "term " + std::to_string(idx);
    if (!term.is_object() || !term.contains("pauli") || !term.contains("coeff"))
      throw std::runtime_error("hamiltonian file: " + where + ": need \"pauli\" and \"coeff\"");
    const std::string label = term["pauli"].get<std::string>();
    if (static_cast<int>(label.size()) != n)
      throw std::runtime_error("hamiltonian file: " + where + ": pauli length " +
                               std::to_string(label.size()) + " does not match n=" + std::to_string(n));
    for (char ch : label)
      if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
        throw std::runtime_error("hamiltonian file: " + where + ": invalid letter '" +
                                 std::string(1, ch) + "'");
    if (!term["coeff"].is_number())
      throw std::runtime_error("hamiltonian file: " + where + ": coeff must be a real number");
    const double coeff = term["coeff"].get<double>();
    if (!std::isfinite(coeff))
      throw std::runtime_error("hamiltonian file: " + where + ": coeff must be finite");
    h.add(PauliString::from_label(label), coeff);
    ++idx;
  }
  if (h.empty()) throw std::runtime_error("hamiltonian file: zero Hamiltonian");
  return h;
}

HamiltonianSpec parse_hamiltonian_text(const std::string& text) {
  std::istringstream in(text);
  return parse_hamiltonian_file(in);
}

}  // namespace cartanq
