#include "mixate/space.hpp"

#include <string>

#include "mixate/error.hpp"

namespace mixate {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < 2) {
    throw Error(ErrorCode::kInvalidAlphabet,
                "alphabet size must be at least 2, got " +
                    std::to_string(size));
  }
}

Config::Config(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

Config::Config(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

Config Config::with(std::size_t site, Symbol value) const {
  Config out = *this;
  out.symbols_.at(site) = value;
  return out;
}

StateSpace::StateSpace(Alphabet alphabet, std::size_t n, std::size_t cap)
    : alphabet_(alphabet), n_(n), size_(1), strides_(n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidConfig, "dimension n must be at least 1");
  }
  const std::size_t q = alphabet_.size();
  for (std::size_t i = n; i-- > 0;) {
    strides_[i] = size_;
    if (size_ > cap / q) {
      throw Error(ErrorCode::kStateSpaceTooLarge,
                  std::to_string(q) + "^" + std::to_string(n) +
                      " states exceeds the dense cap of " +
                      std::to_string(cap));
    }
    size_ *= q;
  }
}

std::size_t StateSpace::encode(const Config& x) const {
  if (x.size() != n_) {
    throw Error(ErrorCode::kInvalidConfig,
                "config has length " + std::to_string(x.size()) +
                    ", expected " + std::to_string(n_));
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!alphabet_.contains(x[i])) {
      throw Error(ErrorCode::kInvalidConfig,
                  "symbol " + std::to_string(x[i]) + " at site " +
                      std::to_string(i) + " outside alphabet of size " +
                      std::to_string(alphabet_.size()));
    }
    index += x[i] * strides_[i];
  }
  return index;
}

Config StateSpace::decode(std::size_t index) const {
  if (index >= size_) {
    throw Error(ErrorCode::kInvalidConfig,
                "index " + std::to_string(index) + " out of range");
  }
  std::vector<Symbol> symbols(n_);
  for (std::size_t i = 0; i < n_; ++i) symbols[i] = symbol_at(index, i);
  return Config(std::move(symbols));
}

std::size_t StateSpace::hamming(std::size_t a, std::size_t b) const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (symbol_at(a, i) != symbol_at(b, i)) ++d;
  }
  return d;
}

std::size_t encode_config(const Config& x, const Alphabet& alphabet) {
  if (x.size() == 0) {
    throw Error(ErrorCode::kInvalidConfig, "empty config");
  }
  // Only the encoding is needed here, so skip the dense cap.
  std::size_t index = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!alphabet.contains(x[i])) {
      throw Error(ErrorCode::kInvalidConfig,
                  "symbol " + std::to_string(x[i]) + " at site " +
                      std::to_string(i) + " outside alphabet");
    }
    index = index * alphabet.size() + x[i];
  }
  return index;
}

}  // namespace mixate
