#include "vibron/fock_basis.hpp"

#include <algorithm>
#include <sstream>

#include "vibron/error.hpp"

namespace vibron {

namespace {

void check_filter(int n, ModeConvention convention, const BlockFilter& f) {
  if (f.kind == BlockFilter::Kind::full) return;
  if (convention != ModeConvention::circular)
    throw ConfigError("magnetization blocks are only defined for the circular convention");
  if (f.kind == BlockFilter::Kind::fixed_l && (f.l_min > n || f.l_min < -n))
    throw ConfigError("fixed_l block requires |l| <= N (l=" + std::to_string(f.l_min) +
                      ", N=" + std::to_string(n) + ")");
  if (f.kind == BlockFilter::Kind::l_band && f.l_min > f.l_max)
    throw ConfigError("l_band requires l_min <= l_max");
}

}  // namespace

std::string to_string(ModeConvention convention) {
  return convention == ModeConvention::circular ? "circular" : "cartesian";
}

BasisPtr FockBasis::enumerate(int n_total, ModeConvention convention, BlockFilter filter) {
  if (n_total < 0) throw ConfigError("particle number must be non-negative");
  check_filter(n_total, convention, filter);

  auto basis = std::shared_ptr<FockBasis>(new FockBasis());
  basis->total_n_ = n_total;
  basis->convention_ = convention;
  basis->filter_ = filter;

  if (filter.kind == BlockFilter::Kind::full) {
    basis->states_.reserve(full_dimension(n_total));
  }
  for (int first = 0; first <= n_total; ++first) {
    for (int zero = 0; zero <= n_total - first; ++zero) {
      const Occupation occ{first, zero, n_total - first - zero};
      if (filter.admits(occ.magnetization())) basis->states_.push_back(occ);
    }
  }
  return basis;
}

BasisPtr FockBasis::truncated_pair(int cutoff, ModeConvention convention) {
  if (cutoff < 0) throw ConfigError("truncation cutoff must be non-negative");
  auto basis = std::shared_ptr<FockBasis>(new FockBasis());
  basis->cutoff_ = cutoff;
  basis->convention_ = convention;
  basis->states_.reserve(static_cast<std::size_t>(cutoff + 1) * (cutoff + 1));
  for (int first = 0; first <= cutoff; ++first)
    for (int second = 0; second <= cutoff; ++second) basis->states_.push_back({first, 0, second});
  return basis;
}

BasisPtr FockBasis::band(int n_total, int lo, int hi) {
  auto basis = std::shared_ptr<FockBasis>(new FockBasis());
  basis->total_n_ = n_total;
  basis->convention_ = ModeConvention::circular;
  lo = std::max(lo, -n_total);
  hi = std::min(hi, n_total);
  basis->filter_ = (lo == hi) ? BlockFilter::fixed_l(lo) : BlockFilter::l_band(lo, hi);
  if (lo == -n_total && hi == n_total) basis->filter_ = BlockFilter::full();
  if (lo > hi) return basis;  // empty
  for (int first = 0; first <= n_total; ++first) {
    for (int zero = 0; zero <= n_total - first; ++zero) {
      const Occupation occ{first, zero, n_total - first - zero};
      const int l = occ.magnetization();
      if (l >= lo && l <= hi) basis->states_.push_back(occ);
    }
  }
  return basis;
}

BasisPtr FockBasis::shifted(const FockBasis& basis, int delta_l) {
  if (!basis.number_conserving()) throw ConfigError("cannot shift a truncated-pair basis");
  if (basis.filter_.kind == BlockFilter::Kind::full) {
    return enumerate(basis.total_n_, basis.convention_, basis.filter_);
  }
  return band(basis.total_n_, basis.filter_.l_min + delta_l, basis.filter_.l_max + delta_l);
}

std::optional<std::size_t> FockBasis::index_of(const Occupation& occ) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), occ);
  if (it == states_.end() || *it != occ) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

bool FockBasis::operator==(const FockBasis& other) const {
  if (total_n_ != other.total_n_ || cutoff_ != other.cutoff_ || convention_ != other.convention_)
    return false;
  if (filter_ == other.filter_) return true;
  // Differently expressed filters may still select the same states (e.g. clipped bands).
  return states_ == other.states_;
}

std::string FockBasis::describe() const {
  std::ostringstream os;
  os << "convention=" << to_string(convention_);
  if (!number_conserving()) {
    os << " truncated_pair cutoff=" << cutoff_;
  } else {
    os << " N=" << total_n_;
    switch (filter_.kind) {
      case BlockFilter::Kind::full: os << " filter=full"; break;
      case BlockFilter::Kind::fixed_l: os << " filter=fixed_l(" << filter_.l_min << ")"; break;
      case BlockFilter::Kind::l_band:
        os << " filter=l_band(" << filter_.l_min << "," << filter_.l_max << ")";
        break;
    }
  }
  os << " dim=" << states_.size();
  return os.str();
}

}  // namespace vibron
