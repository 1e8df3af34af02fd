#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stonean/subset.hpp"

namespace stonean::topo {

/// A finite topological space.
///
/// Internally every finite topology is an Alexandrov topology, so the space
/// is stored through the minimal open neighbourhood of each point; a set is
/// open iff it contains the minimal neighbourhood of each of its points.
/// The explicit family of opens is enumerated on demand.
class FinTop {
 public:
  FinTop() = default;

  /// Validates that `opens` contains the empty set and the full set and is
  /// closed under binary union and intersection.
  static FinTop from_opens(std::vector<std::string> points, const std::vector<Subset>& opens);
  /// Topology generated by an arbitrary family of subsets (as a subbase).
  static FinTop generated(std::vector<std::string> points, const std::vector<Subset>& subbase);
  static FinTop discrete(std::vector<std::string> points);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point(int i) const { return points_[i]; }
  int point_index(const std::string& label) const;  // -1 if absent
  Subset full() const { return Subset::full(size()); }

  Subset min_nbhd(int x) const { return min_nbhd_[x]; }
  bool is_open(Subset a) const;
  bool is_closed(Subset a) const { return is_open(a.complement(size())); }
  bool is_discrete() const;

  Subset interior(Subset a) const;
  Subset closure(Subset a) const;
  /// Int(Cl(A)).
  Subset regularize(Subset a) const;
  /// Points having an open neighbourhood U with A∩U dense in U.
  Subset regularize_by_density(Subset a) const;
  bool is_regular_open(Subset a) const { return is_open(a) && regularize(a) == a; }

  /// All open sets, sorted by bit pattern. Requires size() <= 20.
  std::vector<Subset> opens() const;
  /// Nonempty opens ordered by cardinality, then bit pattern.
  std::vector<Subset> nonempty_opens() const;
  std::vector<Subset> regular_opens() const;

  std::string format(Subset a) const { return format_subset(a, points_); }

  friend bool operator==(const FinTop& a, const FinTop& b) {
    return a.points_ == b.points_ && a.min_nbhd_ == b.min_nbhd_;
  }

 private:
  void check_subset(Subset a) const;

  std::vector<std::string> points_;
  std::vector<Subset> min_nbhd_;
};

/// A finite partial order; `leq(a, b)` reads a <= b.
class FinPoset {
 public:
  FinPoset() = default;
  /// `pairs` lists a <= b facts; the reflexive-transitive closure is taken
  /// and antisymmetry is validated.
  FinPoset(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& pairs);

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& element(int i) const { return elements_[i]; }
  int index_of(const std::string& label) const;
  bool leq(int a, int b) const { return down_[b].contains(a); }
  Subset down(int p) const { return down_[p]; }
  Subset down(Subset x) const;
  bool compatible(int a, int b) const { return !(down_[a] & down_[b]).empty(); }

 private:
  std::vector<std::string> elements_;
  std::vector<Subset> down_;  // down_[p] = {q : q <= p}
};

/// The down-set topology on a poset.
FinTop down_topology(const FinPoset& p);

/// A total function between finite spaces, with continuity and openness computed.
struct ContMap {
  FinTop source;
  FinTop target;
  std::vector<int> fn;

  Subset image(Subset a) const;
  Subset preimage(Subset b) const;
  /// First open set of the target whose preimage is not open.
  std::optional<Subset> continuity_failure() const;
  /// First open set of the source whose image is not open.
  std::optional<Subset> openness_failure() const;
  bool continuous() const { return !continuity_failure(); }
  bool open_map() const { return !openness_failure(); }
};

}  // namespace stonean::topo
