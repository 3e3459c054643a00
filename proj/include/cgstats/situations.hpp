#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cgstats {

// One (relative extension, base field, signature, prime) setting for which
// predictions are produced.  Parameters:
//   p  prime whose Sylow subgroup is studied; the base contains mu_p
//   u  unit-group parameter of the base (rank of units modulo torsion, +1
//      when the base is totally real and p > 2 splits the relative degree;
//      fixed per setting below)
//   q  residue size used by all distribution formulas, q = p^d
//   d  degree of the coefficient ring over Z_p (Galois-module structure)
struct Situation {
  int id;
  std::string label;       // canonical selector
  std::string group;       // relative Galois group
  std::string base;        // base field
  std::string signature;   // archimedean type of the extension
  unsigned long p;
  unsigned u;
  unsigned long q;
  unsigned d;
  bool anomalous;          // extra roots of unity interfere at this prime
};

inline const std::vector<Situation>& situations() {
  static const std::vector<Situation> table = {
      {1, "C2/Q(sqrt-3)", "C2", "Q(sqrt-3)", "complex", 3, 1, 3, 1, false},
      {2, "C2/Q(mu5)", "C2", "Q(mu5)", "complex", 5, 2, 5, 1, false},
      {3, "S3/Q-real", "S3", "Q", "totally real", 2, 2, 2, 1, false},
      {4, "C3/Q", "C3", "Q", "totally real", 2, 1, 4, 2, false},
      {5, "C3/Q(sqrt-3)", "C3", "Q(sqrt-3)", "complex", 2, 1, 4, 2, false},
      {6, "C3/Q(sqrt5)", "C3", "Q(sqrt5)", "totally real", 2, 2, 4, 2, false},
      {7, "C3/Q(sqrt-1)", "C3", "Q(sqrt-1)", "complex", 2, 1, 4, 2, true},
      {8, "D5/Q-complex", "D5", "Q", "complex", 2, 1, 4, 2, false},
      {9, "D5/Q-real", "D5", "Q", "totally real", 2, 2, 4, 2, false},
  };
  return table;
}

inline const Situation& situation_by_id(int id) {
  for (const auto& s : situations())
    if (s.id == id) return s;
  throw std::invalid_argument("unknown situation id " + std::to_string(id));
}

// Selector is either the numeric id or the label.
inline const Situation& situation(const std::string& selector) {
  for (const auto& s : situations())
    if (s.label == selector) return s;
  try {
    size_t pos = 0;
    int id = std::stoi(selector, &pos);
    if (pos == selector.size()) return situation_by_id(id);
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw std::invalid_argument("unknown situation '" + selector + "'");
}

}  // namespace cgstats
