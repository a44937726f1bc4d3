#pragma once

// Matrix forms of the four-party correlation tensor R^ABCD and their Ky Fan
// norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spincorr/bloch.hpp"
#include "spincorr/errors.hpp"
#include "spincorr/linalg.hpp"

namespace spincorr {

/// A bipartition of {A, B, C, D} into row and column parties.
struct Split {
  PartyList rows;
  PartyList cols;

  std::string label() const { return party_string(rows) + "|" + party_string(cols); }
};

/// AB|CD, AC|BD, AD|BC
inline std::array<Split, 3> two_two_splits() {
  return {Split{{0, 1}, {2, 3}}, Split{{0, 2}, {1, 3}}, Split{{0, 3}, {1, 2}}};
}

/// A|BCD, B|ACD, C|ABD, D|ABC
inline std::array<Split, 4> one_three_splits() {
  return {Split{{0}, {1, 2, 3}}, Split{{1}, {0, 2, 3}}, Split{{2}, {0, 1, 3}},
          Split{{3}, {0, 1, 2}}};
}

struct Realignment {
  Split split;
  RealMatrix matrix;
};

/// Entry ((i_row...), (j_col...)) = R^ABCD at the merged index; each group's
/// multi-index runs lexicographically in alphabetical party order.
inline Realignment realign(const CorrelationTensor& r, PartyList rows,
                           PartyList cols) {
  if (r.order() != 4 || r.subset() != PartyList{0, 1, 2, 3}) {
    throw DomainError("realign needs the tensor R^ABCD, got R^" + r.label());
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  if (rows.empty() || cols.empty()) {
    throw DomainError("realign: both groups must be nonempty");
  }
  PartyList all = rows;
  all.insert(all.end(), cols.begin(), cols.end());
  std::sort(all.begin(), all.end());
  if (all != PartyList{0, 1, 2, 3}) {
    throw DomainError("realign: " + party_string(rows) + "|" +
                      party_string(cols) + " is not a partition of ABCD");
  }

  const std::size_t D = r.basis_size();
  const std::size_t n_rows = ipow(D, rows.size());
  const std::size_t n_cols = ipow(D, cols.size());
  const std::array<std::size_t, 4> stride{D * D * D, D * D, D, 1};

  auto offsets = [&](const PartyList& group) {
    std::vector<std::size_t> out(ipow(D, group.size()), 0);
    for (std::size_t m = 0; m < out.size(); ++m) {
      std::size_t rem = m;
      std::size_t off = 0;
      for (std::size_t j = group.size(); j-- > 0;) {
        off += (rem % D) * stride[group[j]];
        rem /= D;
      }
      out[m] = off;
    }
    return out;
  };
  const auto row_off = offsets(rows);
  const auto col_off = offsets(cols);

  RealMatrix m(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i)
    for (std::size_t j = 0; j < n_cols; ++j)
      m(i, j) = r.entries()[row_off[i] + col_off[j]];
  return Realignment{Split{std::move(rows), std::move(cols)}, std::move(m)};
}

inline Realignment realign(const CorrelationTensor& r, const Split& split) {
  return realign(r, split.rows, split.cols);
}

/// Singular values with their running sums ‖S‖_k = α_1 + ... + α_k.
struct KyFanProfile {
  Spectrum singular_values;
  std::vector<double> partial_sums;

  std::size_t size() const noexcept { return partial_sums.size(); }

  /// ‖S‖_k for k >= 1; past the last singular value the sum stays at the
  /// trace norm.
  double norm(std::size_t k) const {
    if (k == 0) throw DomainError("Ky Fan index k starts at 1");
    return partial_sums[std::min(k, partial_sums.size()) - 1];
  }
};

inline KyFanProfile kyfan_profile(const RealMatrix& m,
                                  double tol = kEigenTolerance) {
  KyFanProfile profile{singular_values(m, tol), {}};
  profile.partial_sums.reserve(profile.singular_values.size());
  double running = 0.0;
  for (double v : profile.singular_values.values) {
    running += v;
    profile.partial_sums.push_back(running);
  }
  return profile;
}

}  // namespace spincorr
