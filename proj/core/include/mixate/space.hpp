#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mixate {

using Symbol = std::uint32_t;

// Largest state space the dense (exact) routines will materialize.
inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;

class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s < size_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

// A point of Sigma^n. Entries are validated against an alphabet only when
// the config is encoded, so a Config on its own is just a symbol vector.
class Config {
 public:
  Config() = default;
  explicit Config(std::vector<Symbol> symbols);
  Config(std::initializer_list<Symbol> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol& operator[](std::size_t i) { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  Config with(std::size_t site, Symbol value) const;

  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config&, const Config&) = default;

 private:
  std::vector<Symbol> symbols_;
};

// Sigma^n with the big-endian mixed-radix encoding
//   index = sum_i x_i * q^(n-1-i).
class StateSpace {
 public:
  StateSpace(Alphabet alphabet, std::size_t n,
             std::size_t cap = kDefaultStateCap);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t q() const noexcept { return alphabet_.size(); }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }

  // q^(n-1-site)
  std::size_t stride(std::size_t site) const { return strides_[site]; }

  std::size_t encode(const Config& x) const;
  Config decode(std::size_t index) const;

  Symbol symbol_at(std::size_t index, std::size_t site) const {
    return static_cast<Symbol>((index / strides_[site]) % alphabet_.size());
  }
  std::size_t with_symbol(std::size_t index, std::size_t site,
                          Symbol value) const {
    return index - symbol_at(index, site) * strides_[site] +
           value * strides_[site];
  }
  // First index of the slice {x <- site b : b in Sigma} containing index.
  std::size_t slice_base(std::size_t index, std::size_t site) const {
    return index - symbol_at(index, site) * strides_[site];
  }
  // Number of sites where the two configs differ.
  std::size_t hamming(std::size_t a, std::size_t b) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.alphabet_ == b.alphabet_ && a.n_ == b.n_;
  }

 private:
  Alphabet alphabet_;
  std::size_t n_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

std::size_t encode_config(const Config& x, const Alphabet& alphabet);

}  // namespace mixate
