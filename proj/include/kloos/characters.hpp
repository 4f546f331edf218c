#pragma once

// Dirichlet characters mod N, stored by their exponents against fixed
// generators of the CRT components of (Z/NZ)^x. Values are exact rational
// angles; nothing here touches floating point.
//
// Generators: the least primitive root for odd p^k, -1 for 4, and the pair
// {-1, 5} for 2^k with k >= 3. (Z/2Z)^x is trivial and contributes nothing.

#include <memory>
#include <optional>
#include <vector>

#include "kloos/angle.hpp"
#include "kloos/modular.hpp"

namespace kloos {

struct CharacterComponent {
  i64 prime_power = 1;  // modulus of the CRT factor this generator lives in
  i64 order = 1;
  i64 generator = 1;
  std::vector<i64> log;  // residue mod prime_power -> exponent, -1 for non-units
};

class CharacterGroup {
 public:
  explicit CharacterGroup(i64 modulus) : modulus_(modulus) {
    require(modulus >= 1, "CharacterGroup: modulus must be >= 1");
    for (const auto& [p, e] : factorize(modulus).factors) {
      const i64 pk = PrimePower{p, e}.value();
      if (p == 2) {
        add_two_adic(pk, e);
      } else {
        add_cyclic(p, pk);
      }
    }
    for (const auto& c : components_) exponent_ = std::lcm(exponent_, c.order);
  }

  i64 modulus() const { return modulus_; }
  i64 exponent() const { return exponent_; }
  const std::vector<CharacterComponent>& components() const { return components_; }

  i64 size() const {
    i64 s = 1;
    for (const auto& c : components_) s *= c.order;
    return s;
  }

 private:
  void add_cyclic(i64 p, i64 pk) {
    CharacterComponent c;
    c.prime_power = pk;
    c.order = pk / p * (p - 1);
    c.generator = primitive_root(p, pk);
    c.log.assign(static_cast<std::size_t>(pk), -1);
    i64 x = 1;
    for (i64 k = 0; k < c.order; ++k) {
      c.log[static_cast<std::size_t>(x)] = k;
      x = mulmod(x, c.generator, pk);
    }
    components_.push_back(std::move(c));
  }

  void add_two_adic(i64 pk, int e) {
    if (e == 1) return;
    if (e == 2) {
      CharacterComponent c{4, 2, 3, {-1, 0, -1, 1}};
      components_.push_back(std::move(c));
      return;
    }
    CharacterComponent sign{pk, 2, pk - 1, std::vector<i64>(static_cast<std::size_t>(pk), -1)};
    CharacterComponent five{pk, pk / 4, 5, std::vector<i64>(static_cast<std::size_t>(pk), -1)};
    i64 x = 1;
    for (i64 k = 0; k < pk / 4; ++k) {
      sign.log[static_cast<std::size_t>(x)] = 0;
      five.log[static_cast<std::size_t>(x)] = k;
      const i64 neg = pk - x;
      sign.log[static_cast<std::size_t>(neg)] = 1;
      five.log[static_cast<std::size_t>(neg)] = k;
      x = mulmod(x, 5, pk);
    }
    components_.push_back(std::move(sign));
    components_.push_back(std::move(five));
  }

  i64 modulus_;
  i64 exponent_ = 1;
  std::vector<CharacterComponent> components_;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<i64> exponents)
      : group_(std::move(group)), exponents_(std::move(exponents)) {
    require(exponents_.size() == group_->components().size(),
            "DirichletCharacter: one exponent per component");
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      exponents_[i] = mod(exponents_[i], group_->components()[i].order);
    }
  }

  static DirichletCharacter principal(i64 modulus) {
    auto g = std::make_shared<const CharacterGroup>(modulus);
    std::vector<i64> zeros(g->components().size(), 0);
    return {std::move(g), std::move(zeros)};
  }

  i64 modulus() const { return group_->modulus(); }
  const std::vector<i64>& exponents() const { return exponents_; }
  const CharacterGroup& group() const { return *group_; }

  bool is_principal() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](i64 e) { return e == 0; });
  }

  /// chi(n) as an angle, or nullopt when gcd(n, N) > 1.
  std::optional<RationalAngle> eval(i64 n) const {
    if (std::gcd(mod(n, modulus()), modulus()) != 1) return std::nullopt;
    const i64 big_n = group_->exponent();
    i128 num = 0;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      const auto& c = group_->components()[i];
      const i64 l = c.log[static_cast<std::size_t>(mod(n, c.prime_power))];
      num += static_cast<i128>(exponents_[i]) * l % c.order * (big_n / c.order);
    }
    return RationalAngle(mod_wide(num, big_n), big_n);
  }

  /// chi(n) as a complex number (0 off the unit group).
  cplx value(i64 n) const {
    const auto a = eval(n);
    return a ? to_complex(*a) : cplx{0.0, 0.0};
  }

  /// kappa in {0,1} with chi(-1) = (-1)^kappa.
  int parity() const { return eval(-1)->is_zero() ? 0 : 1; }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<i64> exponents_;
};

/// All phi(N) characters mod N, lexicographic in the component exponents, so
/// the principal character comes first.
inline std::vector<DirichletCharacter> characters_mod(i64 modulus) {
  auto group = std::make_shared<const CharacterGroup>(modulus);
  const auto& comps = group->components();
  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<std::size_t>(group->size()));
  std::vector<i64> e(comps.size(), 0);
  while (true) {
    out.emplace_back(group, e);
    std::size_t i = comps.size();
    while (i > 0) {
      --i;
      if (++e[i] < comps[i].order) break;
      e[i] = 0;
      if (i == 0) return out;
    }
    if (comps.empty()) return out;
  }
}

inline std::optional<RationalAngle> char_eval(const DirichletCharacter& chi, i64 n) {
  return chi.eval(n);
}

inline int char_parity(const DirichletCharacter& chi) { return chi.parity(); }

}  // namespace kloos
