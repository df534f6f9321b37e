#ifndef MCLAT_CORPUS_HPP
#define MCLAT_CORPUS_HPP

#include <string>
#include <vector>

namespace mclat::corpus {

/// Quantifier-free W-formulas (plus one positive existential prefix) with
/// negated atoms, nested terms and every W symbol.
inline const std::vector<std::string>& w_negations() {
  static const std::vector<std::string> c = {
      "!X = bot",
      "X = cz",
      "!cup(X,Y) = cap(X,Y)",
      "!min(X) = max(X)",
      "ips(cup(X,cz),Y) = min(Y) | !X sub Y",
      "!(X = Y & cap(X,Y) = bot)",
      "X sub Y -> !max(Y) sub X",
      "!ips(X,Y) = bot & !min(Y) sub cz",
      "!(X sub Y | Y sub X)",
      "cap(ips(X,X),max(cup(X,Y))) = bot | !cz sub cup(X,Y)",
      "!ips(ips(X,Y),X) = cap(min(X),Y)",
      "E Z. (!Z = bot & Z sub X & !ips(X,Z) = Y)",
  };
  return c;
}

/// Positive existential W-formulas for the W to L translation.
inline const std::vector<std::string>& w_positive() {
  static const std::vector<std::string> c = {
      "cz sub ips(cup(X,cz),X)",
      "X = bot",
      "ips(X,Y) = Z",
      "E Z. (ips(X,Z) = Y & Z sub X)",
      "min(X) = max(X)",
      "cup(X,Y) = cap(cup(X,Y),Z) | X = cz",
      "ips(X,X) = cap(X,Y)",
      "E Y. (Y sub X & ips(cup(Y,cz),Y) = cz)",
      "max(X) sub ips(cup(X,Y),Y)",
      "min(cup(X,Y)) = cz & ips(Y,X) = bot",
      "ips(ips(X,Y),X) = Z",
  };
  return c;
}

/// L-formulas for the L to W translation, covering every L symbol.
inline const std::vector<std::string>& l_formulas() {
  static const std::vector<std::string> c = {
      "l(X) = r(X)",
      "X = bot",
      "X sub Y",
      "cup(X,Y) = Z",
      "cap(X,Y) = bot",
      "min(X) = l(Y)",
      "max(X) = bot",
      "r(cup(X,Y)) sub cup(r(X),r(Y))",
      "E Y. (Y sub X & l(Y) = r(Y) & !Y = bot)",
      "!X = cz | cap(X,cz) = X",
      "l(cap(X,Y)) = min(cap(X,Y))",
      "A Y. (cap(Y,l(X)) = Y -> cap(Y,r(X)) = bot | max(Y) sub r(X))",
      "cap(X,Y) = Z",
  };
  return c;
}

/// L-formulas inside the pipeline's fragment.
inline const std::vector<std::string>& pipeline_supported() {
  static const std::vector<std::string> c = {
      "X = bot",
      "l(X) = r(X) & !X = bot",
      "!X = Y",
      "max(X) = bot",
      "min(X) sub l(Y)",
      "!l(X) = l(Y) | r(X) sub r(Y)",
      "X = cz",
      "cap(l(X),r(X)) = l(X)",
      "E Y. (Y = l(X) & !Y = bot)",
      "!max(X) = r(X)",
      "min(X) = l(Y)",
      "cup(l(X),cz) = l(X)",
      "!cap(r(X),l(Y)) = bot",
      "l(X) sub r(Y) & !max(Y) = bot",
      "!min(X) = min(Y)",
      "X = Y",
      "!X = cz | cap(X,cz) = X",
  };
  return c;
}

/// L-formulas whose W-image keeps an essential universal quantifier.
inline const std::vector<std::string>& pipeline_unsupported() {
  static const std::vector<std::string> c = {
      "A Y. (Y sub X -> Y = X)",
      "X sub Y",
      "cup(X,Y) = Z",
      "!cup(X,Y) = X",
      "E Y. (r(Y) = l(X) & Y sub X)",
  };
  return c;
}

} // namespace mclat::corpus

#endif // MCLAT_CORPUS_HPP
