#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace stonean {

/// Largest carrier size representable by a Subset.
inline constexpr int kMaxPoints = 64;

/// A subset of {0, ..., 63}, used for atom sets, point sets and germ sets.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

  static constexpr Subset singleton(int i) { return Subset(std::uint64_t{1} << i); }
  static constexpr Subset full(int n) {
    return Subset(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static Subset of(const std::vector<int>& members) {
    Subset s;
    for (int m : members) s = s.with(m);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(Subset o) const { return (bits_ & o.bits_) != 0; }
  constexpr Subset with(int i) const { return Subset(bits_ | (std::uint64_t{1} << i)); }
  constexpr Subset without(int i) const { return Subset(bits_ & ~(std::uint64_t{1} << i)); }
  constexpr Subset complement(int n) const { return Subset(~bits_ & full(n).bits_); }
  constexpr int first() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }

  constexpr Subset operator|(Subset o) const { return Subset(bits_ | o.bits_); }
  constexpr Subset operator&(Subset o) const { return Subset(bits_ & o.bits_); }
  constexpr Subset operator-(Subset o) const { return Subset(bits_ & ~o.bits_); }
  constexpr Subset& operator|=(Subset o) { bits_ |= o.bits_; return *this; }
  constexpr Subset& operator&=(Subset o) { bits_ &= o.bits_; return *this; }

  constexpr bool operator==(const Subset&) const = default;
  constexpr auto operator<=>(const Subset&) const = default;

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Renders a subset as "{l0,l1}" using the given labels.
std::string format_subset(Subset s, const std::vector<std::string>& labels);

}  // namespace stonean
