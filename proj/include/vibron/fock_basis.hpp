#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vibron {

/// Single-particle mode labelling of the three bosonic modes.
///
/// circular:  (tau_plus, sigma, tau_minus)  -- spinor language (m_F = +1, 0, -1)
/// cartesian: (tau_x,    sigma, tau_y)
enum class ModeConvention { circular, cartesian };

/// Occupation numbers of the three modes. `first`/`second` are n_plus/n_minus in the
/// circular convention and n_x/n_y in the cartesian one; `zero` is always the sigma mode.
struct Occupation {
  int first = 0;
  int zero = 0;
  int second = 0;

  int total() const { return first + zero + second; }
  /// l = n_plus - n_minus; only a good quantum number in the circular convention.
  int magnetization() const { return first - second; }

  auto operator<=>(const Occupation&) const = default;
};

/// Restriction of the circular Fock space by magnetization l = n_plus - n_minus.
struct BlockFilter {
  enum class Kind { full, fixed_l, l_band };
  Kind kind = Kind::full;
  int l_min = 0;
  int l_max = 0;

  static BlockFilter full() { return {}; }
  static BlockFilter fixed_l(int l) { return {Kind::fixed_l, l, l}; }
  static BlockFilter l_band(int lo, int hi) { return {Kind::l_band, lo, hi}; }

  bool admits(int l) const { return kind == Kind::full || (l >= l_min && l <= l_max); }
  bool operator==(const BlockFilter&) const = default;
};

class FockBasis;
using BasisPtr = std::shared_ptr<const FockBasis>;

/// Enumerated Fock basis of three bosonic modes.
///
/// Two families exist:
///  - number conserving: every state has first + zero + second = N;
///  - truncated pair: the sigma mode is eliminated (zero = 0) and first, second
///    independently range over [0, cutoff]. Used by the low-depletion model.
///
/// States are ordered lexicographically by (first, zero, second), ascending. For a
/// number-conserving basis this is the same as ordering by (first, zero). Lookup is a
/// binary search, so the ordering is part of the contract. Immutable after construction.
class FockBasis {
 public:
  /// Throws ConfigError for N < 0, |l| > N on fixed_l, inverted bands, or any block
  /// filter on a cartesian basis (l is not diagonal there).
  static BasisPtr enumerate(int n_total, ModeConvention convention,
                            BlockFilter filter = BlockFilter::full());

  /// Two-mode (first, second) product basis with each occupation in [0, cutoff].
  static BasisPtr truncated_pair(int cutoff, ModeConvention convention = ModeConvention::cartesian);

  /// Same convention and N, filter shifted by `delta_l` and clipped to [-N, N].
  /// Full bases map to themselves. The result may be empty.
  static BasisPtr shifted(const FockBasis& basis, int delta_l);

  /// Smallest band basis that contains all l in [lo, hi] clipped to [-N, N].
  static BasisPtr band(int n_total, int lo, int hi);

  int total_n() const { return total_n_; }
  ModeConvention convention() const { return convention_; }
  const BlockFilter& filter() const { return filter_; }
  bool number_conserving() const { return cutoff_ < 0; }
  /// Per-mode cutoff for truncated-pair bases, -1 otherwise.
  int cutoff() const { return cutoff_; }
  bool is_full() const { return number_conserving() && filter_.kind == BlockFilter::Kind::full; }

  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  const Occupation& state(std::size_t i) const { return states_[i]; }
  const std::vector<Occupation>& states() const { return states_; }

  std::optional<std::size_t> index_of(const Occupation& occ) const;
  bool contains(const Occupation& occ) const { return index_of(occ).has_value(); }

  /// Structural equality (same parameters imply the same state list).
  bool operator==(const FockBasis& other) const;

  std::string describe() const;

  static std::size_t full_dimension(int n_total) {
    return static_cast<std::size_t>(n_total + 1) * static_cast<std::size_t>(n_total + 2) / 2;
  }

 private:
  FockBasis() = default;

  int total_n_ = 0;
  int cutoff_ = -1;
  ModeConvention convention_ = ModeConvention::circular;
  BlockFilter filter_;
  std::vector<Occupation> states_;
};

inline bool same_basis(const BasisPtr& a, const BasisPtr& b) { return a == b || (a && b && *a == *b); }

std::string to_string(ModeConvention convention);

}  // namespace vibron
