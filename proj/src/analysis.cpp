// SPDX-License-Identifier: Apache-2.0
#include "wqaoa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wqaoa/error.hpp"

namespace wqaoa {

void SymmetryOrbitSpec::validate() const {
  if (!(shift_quantum > 0.0) || !std::isfinite(shift_quantum)) throw DomainError("shift quantum must be positive");
  if (!(gamma_shift_quantum >= 0.0) || !std::isfinite(gamma_shift_quantum))
    throw DomainError("gamma shift quantum must be nonnegative");
  if (shift_window < 1) throw DomainError("shift window must be at least 1");
}

namespace {

std::size_t orbit_size(int p, const SymmetryOrbitSpec& spec) {
  const double per = 2.0 * spec.shift_window + 1.0;
  const int axes = spec.gamma_shift_quantum > 0.0 ? 2 * p : p;
  const double size = std::pow(per, axes) * (spec.include_time_reversal ? 2.0 : 1.0);
  if (size > static_cast<double>(kMaxOrbitSize))
    throw ResourceError("symmetry orbit would have " + std::to_string(size) + " members, limit is " +
                        std::to_string(kMaxOrbitSize));
  return static_cast<std::size_t>(size);
}

// Calls visit(beta', gamma') for every orbit member in a fixed order:
// identity sector first, shift offsets cycling 0, -1, +1, -2, +2, ...
template <class Visit>
void for_each_member(const QaoaParams& params, const SymmetryOrbitSpec& spec, Visit&& visit) {
  spec.validate();
  const int p = params.depth();
  orbit_size(p, spec);
  const int per = 2 * spec.shift_window + 1;
  const int axes = spec.gamma_shift_quantum > 0.0 ? 2 * p : p;
  auto offset = [](int code) { return code == 0 ? 0 : ((code % 2) ? -(code + 1) / 2 : code / 2); };
  std::vector<double> beta(static_cast<std::size_t>(p));
  std::vector<double> gamma(static_cast<std::size_t>(p));
  for (int sector = 0; sector < (spec.include_time_reversal ? 2 : 1); ++sector) {
    const double sign = sector == 0 ? 1.0 : -1.0;
    std::vector<int> code(static_cast<std::size_t>(axes), 0);
    while (true) {
      for (int l = 0; l < p; ++l) {
        beta[l] = sign * params.beta()[l] + offset(code[l]) * spec.shift_quantum;
        gamma[l] = sign * params.gamma()[l];
        if (axes > p) gamma[l] += offset(code[p + l]) * spec.gamma_shift_quantum;
      }
      visit(beta, gamma);
      int l = 0;
      while (l < axes && ++code[l] == per) code[l++] = 0;
      if (l == axes) break;
    }
  }
}

// Lattice image x + k q nearest to target; the smaller image on a tie.
double nearest_image(double x, double q, double target) {
  if (q <= 0.0) return x;
  const double k = std::floor((target - x) / q);
  const double lo = x + k * q, hi = x + (k + 1) * q;
  return std::abs(hi - target) < std::abs(lo - target) ? hi : lo;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

double gamma_period(const DiagonalObjective& diag) {
  const auto v = diag.values();
  // Integers beyond 2^53 are not represented exactly.
  constexpr double kExactLimit = 9007199254740992.0;
  std::uint64_t g = 0;
  for (double x : v) {
    if (x != std::round(x) || std::abs(x) >= kExactLimit) return 0.0;
    g = std::gcd(g, static_cast<std::uint64_t>(std::abs(x - v[0])));
  }
  return g == 0 ? 0.0 : 2.0 * std::numbers::pi / static_cast<double>(g);
}

std::vector<QaoaParams> symmetry_orbit(const QaoaParams& params, const SymmetryOrbitSpec& spec) {
  std::vector<QaoaParams> orbit;
  orbit.reserve(orbit_size(params.depth(), spec));
  for_each_member(params, spec, [&](const auto& b, const auto& g) { orbit.emplace_back(b, g); });
  return orbit;
}

QaoaParams canonicalize(const QaoaParams& opt, const QaoaParams& reference, const SymmetryOrbitSpec& spec) {
  if (opt.depth() != reference.depth()) throw DimensionError("parameter depths differ");
  spec.validate();
  // The distance is separable, so each sector's best member takes the
  // nearest lattice image component by component.
  std::optional<QaoaParams> best;
  double best_b = 0.0;
  double best_g = 0.0;
  for (int sector = 0; sector < (spec.include_time_reversal ? 2 : 1); ++sector) {
    const double sign = sector == 0 ? 1.0 : -1.0;
    std::vector<double> b(opt.beta()), g(opt.gamma());
    for (std::size_t l = 0; l < b.size(); ++l) {
      b[l] = nearest_image(sign * b[l], spec.shift_quantum, reference.beta()[l]);
      g[l] = nearest_image(sign * g[l], spec.gamma_shift_quantum, reference.gamma()[l]);
    }
    const double db = sq_dist(b, reference.beta());
    const double dg = sq_dist(g, reference.gamma());
    bool take = !best || db < best_b || (db == best_b && dg < best_g);
    if (best && db == best_b && dg == best_g) {
      const auto flat = best->flat();
      std::vector<double> cand(b);
      cand.insert(cand.end(), g.begin(), g.end());
      take = std::lexicographical_compare(cand.begin(), cand.end(), flat.begin(), flat.end());
    }
    if (take) {
      best.emplace(std::move(b), std::move(g));
      best_b = db;
      best_g = dg;
    }
  }
  return *best;
}

ParamDistance canonical_distance(const QaoaParams& opt, const QaoaParams& transferred, const SymmetryOrbitSpec& spec) {
  const auto member = canonicalize(opt, transferred, spec);
  const double db = sq_dist(member.beta(), transferred.beta());
  const double dg = sq_dist(member.gamma(), transferred.gamma());
  return {std::sqrt(db), std::sqrt(dg), std::sqrt(db + dg)};
}

// ---------------------------------------------------------------------------

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw DomainError("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto q = [&](double frac) {
    const double pos = frac * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {q(0.25), q(0.5), q(0.75)};
}

double gap_pp(double r_high, double r_low) { return (r_high - r_low) * 100.0; }

bool recovered(double r_polished, double r_optimized) {
  return std::abs(r_polished - r_optimized) <= kRecoveryTolerance;
}

GapStatistics aggregate(std::span<const InstanceRecord> records) {
  if (records.empty()) throw DomainError("cannot aggregate an empty record set");
  GapStatistics stats;
  stats.count = records.size();
  stats.per_instance.assign(records.begin(), records.end());

  std::vector<double> rt, rk, rp, ro, gaps, kde_gaps;
  std::size_t recovery_total = 0, recovery_hits = 0, match_total = 0, match_hits = 0;
  for (const auto& r : records) {
    rt.push_back(r.r_transferred);
    if (r.r_kde) rk.push_back(*r.r_kde);
    if (r.r_polished) rp.push_back(*r.r_polished);
    if (r.r_optimized) {
      ro.push_back(*r.r_optimized);
      gaps.push_back(gap_pp(*r.r_optimized, r.r_transferred));
      if (r.r_kde) kde_gaps.push_back(gap_pp(*r.r_optimized, *r.r_kde));
      if (r.r_polished) {
        ++recovery_total;
        if (recovered(*r.r_polished, *r.r_optimized)) ++recovery_hits;
      }
    }
    if (r.polished_param_distance) {
      ++match_total;
      if (*r.polished_param_distance <= kParameterMatchTolerance) ++match_hits;
    }
  }
  stats.r_transferred = quartiles(rt);
  if (!rk.empty()) stats.r_kde = quartiles(rk);
  if (!rp.empty()) stats.r_polished = quartiles(rp);
  if (!ro.empty()) stats.r_optimized = quartiles(ro);
  if (!gaps.empty()) {
    const auto q = quartiles(gaps);
    stats.median_gap_pp = q.median;
    stats.iqr = std::make_pair(q.q1, q.q3);
  }
  if (!kde_gaps.empty()) stats.kde_median_gap_pp = quartiles(kde_gaps).median;
  if (recovery_total > 0) stats.recovery_rate = static_cast<double>(recovery_hits) / static_cast<double>(recovery_total);
  if (match_total > 0) stats.parameter_match_rate = static_cast<double>(match_hits) / static_cast<double>(match_total);
  return stats;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("spearman inputs differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

StdGapTable weight_std_vs_gap(std::span<const InstanceRecord> records) {
  StdGapTable table;
  std::vector<double> stds, gaps;
  for (const auto& r : records) {
    if (!r.r_optimized) continue;
    table.rows.push_back({r.graph_id, r.weight_std, gap_pp(r.r_transferred, *r.r_optimized)});
    stds.push_back(r.weight_std);
    gaps.push_back(table.rows.back().gap_pp);
  }
  table.rank_correlation = spearman(stds, gaps);
  return table;
}

}  // namespace wqaoa
