#ifndef MINIMAX_DIAGNOSTICS_HPP
#define MINIMAX_DIAGNOSTICS_HPP

// Sequence-based semi-decision procedures for semicontinuity of functions and
// multifunctions, A-lower semicontinuity and (K-)inf-compactness.
//
// Every analytic "for each sequence" is replaced by a finite, deterministic
// probe family. A counterexample is conclusive; its absence is not a proof.
//
// A probe of length N is judged on its tail (the last N/2 terms). A gap
// sequence g_n (a value deficit, or a distance to a target) witnesses a
// failure when it stays >= tol over the whole tail and does not decay: the
// last term keeps at least `persistence` of the first tail term. Sequences
// that converge at any algebraic rate shrink by a constant factor over the
// tail and are not flagged, even when their tail is still above tol.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "minimax/engine.hpp"
#include "minimax/errors.hpp"
#include "minimax/ext_real.hpp"
#include "minimax/grid.hpp"
#include "minimax/problem.hpp"
#include "minimax/scan.hpp"
#include "minimax/set_desc.hpp"

namespace minimax::diag {

using Point = std::vector<double>;

enum class Rate { Harmonic, Quadratic, Custom };

inline std::string_view to_string(Rate r) {
  switch (r) {
    case Rate::Harmonic: return "harmonic";
    case Rate::Quadratic: return "quadratic";
    case Rate::Custom: return "custom";
  }
  return "unknown";
}

struct SequenceProbe {
  std::string label;
  Point anchor;
  Point direction;
  Rate rate = Rate::Custom;
  double scale = 1.0;
  std::vector<Point> points;       ///< p_1 .. p_N
  std::vector<double> companions;  ///< optional a_n in Phi_A(x_n)

  std::size_t size() const noexcept { return points.size(); }
  bool has_companions() const noexcept { return !companions.empty(); }
};

struct ProbeConfig {
  std::size_t length = 128;
  std::vector<double> scales{1.0};
  bool harmonic = true;
  bool quadratic = true;
  std::vector<SequenceProbe> custom;
};

/// Probe from an explicit sequence, echoed verbatim.
inline SequenceProbe custom_probe(Point anchor, std::vector<Point> points, std::vector<double> companions = {},
                                  std::string label = "custom") {
  if (!companions.empty() && companions.size() != points.size())
    throw std::invalid_argument("companion sequence length differs from the probe length");
  SequenceProbe p;
  p.label = std::move(label);
  p.anchor = std::move(anchor);
  p.points = std::move(points);
  p.companions = std::move(companions);
  return p;
}

/// Deterministic family p_n = anchor + direction * scale * r(n), with
/// r(n) = 1/n or 1/n^2, over every nonzero direction in {-1, 0, 1}^d, followed
/// by the user-supplied sequences.
inline std::vector<SequenceProbe> generate_probes(const Point& anchor, const ProbeConfig& cfg) {
  if (cfg.length < 16) throw std::invalid_argument("probe length must be at least 16");
  const std::size_t d = anchor.size();
  std::vector<Point> dirs;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    Point dir(d);
    std::size_t code = c;
    bool nonzero = false;
    for (std::size_t i = 0; i < d; ++i) {
      dir[i] = static_cast<double>(code % 3) - 1.0;
      nonzero = nonzero || dir[i] != 0.0;
      code /= 3;
    }
    if (nonzero) dirs.push_back(std::move(dir));
  }
  // +1 before -1 along the leading axis
  std::stable_sort(dirs.begin(), dirs.end(), [](const Point& l, const Point& r) { return l > r; });

  std::vector<SequenceProbe> out;
  std::vector<Rate> rates;
  if (cfg.harmonic) rates.push_back(Rate::Harmonic);
  if (cfg.quadratic) rates.push_back(Rate::Quadratic);
  for (double scale : cfg.scales) {
    for (Rate rate : rates) {
      for (const Point& dir : dirs) {
        SequenceProbe p;
        p.anchor = anchor;
        p.direction = dir;
        p.rate = rate;
        p.scale = scale;
        p.label = fmt::format("{} c={} dir=({})", to_string(rate), scale, fmt::join(dir, ","));
        for (std::size_t n = 1; n <= cfg.length; ++n) {
          const double nn = static_cast<double>(n);
          const double r = rate == Rate::Harmonic ? scale / nn : scale / (nn * nn);
          Point q(d);
          for (std::size_t i = 0; i < d; ++i) q[i] = anchor[i] + dir[i] * r;
          p.points.push_back(std::move(q));
        }
        out.push_back(std::move(p));
      }
    }
  }
  out.insert(out.end(), cfg.custom.begin(), cfg.custom.end());
  return out;
}

/// Drops probes with any point outside the domain.
template <typename InDomain>
std::vector<SequenceProbe> keep_inside(std::vector<SequenceProbe> probes, InDomain&& in_domain) {
  std::erase_if(probes, [&](const SequenceProbe& p) {
    return std::any_of(p.points.begin(), p.points.end(), [&](const Point& q) { return !in_domain(q); });
  });
  return probes;
}

enum class Outcome { CounterexampleFound, NoCounterexampleFound };

inline std::string_view to_string(Outcome o) {
  return o == Outcome::CounterexampleFound ? "CounterexampleFound" : "NoCounterexampleFound";
}

struct Witness {
  std::size_t probe_index = 0;
  SequenceProbe probe;
  std::vector<std::size_t> indices;  ///< 1-based n
  std::vector<double> margins;       ///< offending gap at each index
  std::vector<double> values;        ///< auxiliary per-index values (u-values, chosen y_n), may be empty
  std::string detail;
};

struct Verdict {
  std::string property;
  Outcome outcome = Outcome::NoCounterexampleFound;
  std::optional<Witness> witness;
  std::size_t probes_tested = 0;
  double tolerance_used = 0.0;
  bool truncated = false;  ///< some fiber was cut at the truncation radius
  std::string note;        ///< advisory text that does not affect the outcome

  bool counterexample() const noexcept { return outcome == Outcome::CounterexampleFound; }

  double min_margin() const {
    if (!witness || witness->margins.empty()) return 0.0;
    return *std::min_element(witness->margins.begin(), witness->margins.end());
  }

  std::string summary() const {
    if (counterexample())
      return fmt::format("{}: counterexample found on probe '{}' (min tail margin {}){}{}", property,
                         witness->probe.label, min_margin(), witness->detail.empty() ? "" : "; " + witness->detail,
                         note.empty() ? "" : "; " + note);
    return fmt::format("{}: no counterexample among tested probes ({} probes, tol {}){}{}", property, probes_tested,
                       tolerance_used, truncated ? "; fibers truncated" : "", note.empty() ? "" : "; " + note);
  }
};

struct DiagnosticConfig {
  double tol = 1e-4;
  double persistence = 0.75;  ///< minimum last/first tail ratio of a non-decaying gap
  GridSpec grid;              ///< fiber sampling, truncation and inner searches
  std::size_t fiber_samples = 9;
};

struct TailAssessment {
  bool counterexample = false;
  std::vector<std::size_t> indices;
  std::vector<double> margins;
};

/// Judges a window of gaps as a whole: every term at least tol, and the last
/// term at least `persistence` times the first.
inline TailAssessment assess_window(const std::vector<double>& gaps, std::size_t first_index, double tol,
                                    double persistence) {
  TailAssessment out;
  if (gaps.empty()) return out;
  bool all_above = true;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] >= tol) {
      out.indices.push_back(first_index + i);
      out.margins.push_back(gaps[i]);
    } else {
      all_above = false;
    }
  }
  const double first = gaps.front();
  const double last = gaps.back();
  const bool persists = std::isinf(last) || last >= persistence * first;
  out.counterexample = all_above && persists;
  if (!out.counterexample) {
    out.indices.clear();
    out.margins.clear();
  }
  return out;
}

/// Judges a gap sequence g_1..g_N on its tail half.
inline TailAssessment assess_tail(const std::vector<double>& gaps, double tol, double persistence) {
  if (gaps.size() < 2) return {};
  const std::size_t start = gaps.size() - gaps.size() / 2;
  return assess_window(std::vector<double>(gaps.begin() + static_cast<std::ptrdiff_t>(start), gaps.end()), start + 1,
                       tol, persistence);
}

namespace detail {

// hi - lo with equal infinities giving 0.
inline double gap(const ExtReal& hi, const ExtReal& lo) {
  if (hi == lo) return 0.0;
  return (hi - lo).to_double();
}

template <typename T>
double to_real(const T& v) {
  if constexpr (std::is_same_v<std::decay_t<T>, ExtReal>) return v.to_double();
  else return static_cast<double>(v);
}

// Keeps the witness whose smallest tail margin is largest; ties keep the earlier one.
inline void consider(std::optional<Witness>& best, Witness w) {
  auto key = [](const Witness& x) { return *std::min_element(x.margins.begin(), x.margins.end()); };
  if (!best || key(w) > key(*best)) best = std::move(w);
}

/// Up to `count` representative points of a fiber: part endpoints plus a
/// uniform interior grid, after truncation.
inline std::vector<double> representative_points(const SetDesc& fiber, const GridSpec& grid, std::size_t count,
                                                 bool& truncated) {
  if (!fiber.bounded()) truncated = true;
  std::vector<double> out;
  const SetDesc cut = fiber.truncate(grid.truncation_radius);
  for (const Part& p : cut.parts()) {
    const double lo = minimax::detail::inner_point(p.lo, p.lo_closed, +1);
    const double hi = minimax::detail::inner_point(p.hi, p.hi_closed, -1);
    if (!(hi > lo)) {
      out.push_back(p.lo);
      continue;
    }
    const std::size_t k = std::max<std::size_t>(2, count / std::max<std::size_t>(1, cut.parts().size()));
    for (std::size_t i = 0; i < k; ++i)
      out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
  }
  return out;
}

// Unbounded parts cut at `radius` past their finite end (or at +-radius).
inline SetDesc cut_unbounded(const SetDesc& s, double radius, bool& truncated) {
  std::vector<Part> parts;
  for (Part p : s.parts()) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi)) truncated = true;
    if (!std::isfinite(p.lo) && !std::isfinite(p.hi)) {
      p = Part{-radius, radius, true, true};
    } else if (!std::isfinite(p.hi)) {
      p.hi = p.lo + radius;
      p.hi_closed = true;
    } else if (!std::isfinite(p.lo)) {
      p.lo = p.hi - radius;
      p.lo_closed = true;
    }
    parts.push_back(p);
  }
  return SetDesc::from_parts(std::move(parts));
}

}  // namespace detail

enum class Side { Lower, Upper };

/// liminf f(s_n) >= f(s) (Lower) or limsup f(s_n) <= f(s) (Upper) along each
/// probe. Upper mode is Lower mode applied to -f.
template <typename F, typename InDomain>
Verdict check_function_semicontinuity(F&& f, InDomain&& in_domain, const Point& s, Side side,
                                      const std::vector<SequenceProbe>& probes, const DiagnosticConfig& cfg) {
  if (!in_domain(s)) throw DomainError("semicontinuity anchor outside the domain");
  auto signed_value = [&](const Point& p) {
    const ExtReal v(detail::to_real(f(p)));
    return side == Side::Lower ? v : -v;
  };

  Verdict verdict;
  verdict.property = side == Side::Lower ? "function lsc" : "function usc";
  verdict.tolerance_used = cfg.tol;
  const ExtReal at = signed_value(s);
  std::optional<Witness> best;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const SequenceProbe& probe = probes[k];
    std::vector<double> gaps;
    gaps.reserve(probe.size());
    for (const Point& q : probe.points) {
      if (!in_domain(q)) throw DomainError(fmt::format("probe '{}' leaves the domain", probe.label));
      gaps.push_back(detail::gap(at, signed_value(q)));
    }
    ++verdict.probes_tested;
    TailAssessment t = assess_tail(gaps, cfg.tol, cfg.persistence);
    if (t.counterexample) detail::consider(best, Witness{k, probe, std::move(t.indices), std::move(t.margins), {}, {}});
  }
  if (best) {
    verdict.outcome = Outcome::CounterexampleFound;
    verdict.witness = std::move(best);
  }
  return verdict;
}

/// Berge lower semicontinuity at p: every sampled b in m(p) is approached by
/// the fibers m(p_n), i.e. dist(m(p_n), b) -> 0 along each probe.
template <typename M>
Verdict check_multifunction_lsc(M&& m, const Point& p, const std::vector<SequenceProbe>& probes,
                                const DiagnosticConfig& cfg) {
  Verdict verdict;
  verdict.property = "multifunction lsc";
  verdict.tolerance_used = cfg.tol;
  const SetDesc at = m(p);
  const std::vector<double> targets = detail::representative_points(at, cfg.grid, cfg.fiber_samples, verdict.truncated);
  std::optional<Witness> best;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const SequenceProbe& probe = probes[k];
    std::vector<SetDesc> fibers;
    fibers.reserve(probe.size());
    for (const Point& q : probe.points) fibers.push_back(m(q));
    ++verdict.probes_tested;
    for (double b : targets) {
      std::vector<double> d;
      d.reserve(fibers.size());
      for (const SetDesc& fib : fibers) d.push_back(fib.dist(b).to_double());
      TailAssessment t = assess_tail(d, cfg.tol, cfg.persistence);
      if (t.counterexample)
        detail::consider(best, Witness{k, probe, std::move(t.indices), std::move(t.margins), {},
                                       fmt::format("target b = {}", b)});
    }
  }
  if (best) {
    verdict.outcome = Outcome::CounterexampleFound;
    verdict.witness = std::move(best);
  }
  return verdict;
}

/// Berge upper semicontinuity at p: the excess of m(p_n) over m(p) tends to 0.
/// Unbounded fibers are cut `truncation_radius` past their finite end.
/// Margins are recorded for every index, not only the tail.
template <typename M>
Verdict check_multifunction_usc(M&& m, const Point& p, const std::vector<SequenceProbe>& probes,
                                const DiagnosticConfig& cfg) {
  Verdict verdict;
  verdict.property = "multifunction usc";
  verdict.tolerance_used = cfg.tol;
  const SetDesc at = m(p);
  std::optional<Witness> best;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const SequenceProbe& probe = probes[k];
    std::vector<double> excess;
    excess.reserve(probe.size());
    for (const Point& q : probe.points) {
      const SetDesc fib = detail::cut_unbounded(m(q), cfg.grid.truncation_radius, verdict.truncated);
      excess.push_back(fib.excess_over(at).to_double());
    }
    ++verdict.probes_tested;
    TailAssessment t = assess_tail(excess, cfg.tol, cfg.persistence);
    if (t.counterexample) {
      Witness w{k, probe, std::move(t.indices), std::move(t.margins), excess, "values: excess at every index"};
      detail::consider(best, std::move(w));
    }
  }
  if (best) {
    verdict.outcome = Outcome::CounterexampleFound;
    verdict.witness = std::move(best);
  }
  return verdict;
}

/// A-lower semicontinuity of Phi_B at (x, a, b).
///
/// Each probe supplies x_n -> x. Probes carrying companions use them as a_n;
/// probes without companions get an adversarial a_n: the node of the engine's
/// sampling plan over Phi_A(x_n) maximizing d_n = dist(Phi_B(x_n, a_n), b),
/// among candidates whose limit fiber still contains b (dist(Phi_B(x, a'), b)
/// <= tol for a' the projection of a_n onto Phi_A(x)).
inline Verdict check_A_lsc(const Problem& prob, double x, double a, double b,
                           const std::vector<SequenceProbe>& probes, const DiagnosticConfig& cfg) {
  if (!prob.phi_B.in_domain(x, a)) throw DomainError("A-lsc anchor: a is not in Phi_A(x)");
  if (!prob.phi_B(x, a).member(b)) throw DomainError("A-lsc anchor: b is not in Phi_B(x, a)");
  Verdict verdict;
  verdict.property = "A-lsc";
  verdict.tolerance_used = cfg.tol;
  const SetDesc limit_actions = prob.phi_A(x);

  std::optional<Witness> best;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const SequenceProbe& probe = probes[k];
    std::vector<double> d;
    std::vector<double> chosen;
    for (std::size_t n = 0; n < probe.size(); ++n) {
      const double xn = probe.points[n].at(0);
      if (probe.has_companions()) {
        const double an = probe.companions[n];
        if (!prob.phi_B.in_domain(xn, an))
          throw DomainError(fmt::format("companion a_{} = {} is not in Phi_A({})", n + 1, an, xn));
        d.push_back(prob.phi_B.unchecked(xn, an).dist(b).to_double());
        chosen.push_back(an);
        continue;
      }
      double worst = -1.0;
      double worst_a = 0.0;
      const SetDesc actions = prob.phi_A(xn);
      for (const Part& part : actions.parts()) {
        const auto plan = minimax::detail::plan_part(part, cfg.grid);
        for (double an : plan.nodes) {
          const double limit_a = limit_actions.project(an);
          if (prob.phi_B.unchecked(x, limit_a).dist(b).to_double() > cfg.tol) continue;
          const double dn = prob.phi_B.unchecked(xn, an).dist(b).to_double();
          if (dn > worst) {
            worst = dn;
            worst_a = an;
          }
        }
      }
      d.push_back(std::max(worst, 0.0));
      chosen.push_back(worst_a);
    }
    ++verdict.probes_tested;
    TailAssessment t = assess_tail(d, cfg.tol, cfg.persistence);
    if (t.counterexample) {
      std::vector<double> tail_a;
      for (std::size_t idx : t.indices) tail_a.push_back(chosen[idx - 1]);
      Witness w{k, probe, std::move(t.indices), std::move(t.margins), std::move(tail_a),
                probe.has_companions() ? "values: supplied companions a_n" : "values: adversarial companions a_n"};
      detail::consider(best, std::move(w));
    }
  }
  if (best) {
    verdict.outcome = Outcome::CounterexampleFound;
    verdict.witness = std::move(best);
  }
  return verdict;
}

/// One-dimensional x probes converted to A-lsc probes without companions, so
/// that the adversarial generator runs on each of them.
inline std::vector<SequenceProbe> strip_companions(std::vector<SequenceProbe> probes) {
  for (auto& p : probes) p.companions.clear();
  return probes;
}

struct LevelCap {
  double lambda = 0.0;
};

/// K-inf-compactness of u on Gr(m) through the two-part sequence criterion:
/// (i) u is lower semicontinuous at sampled graph points;
/// (ii) along every probe p_n -> p, points y_n in m(p_n) with u(p_n, y_n) <= lambda
///      have a limit point in m(p).
/// For (ii) two sequences are examined on the tail: the minimizers of
/// u(p_n, .) and the sub-level samples farthest from m(p). A sequence fails
/// when its magnitudes increase strictly across the tail past the truncation
/// radius, or when its distance to m(p) persists above tol.
template <typename U, typename M, typename InDomain>
Verdict check_K_inf_compact(U&& u, M&& m, InDomain&& in_domain, const std::vector<Point>& anchors, LevelCap cap,
                            const ProbeConfig& probe_cfg, const DiagnosticConfig& cfg) {
  Verdict verdict;
  verdict.property = "K-inf-compact";
  verdict.tolerance_used = cfg.tol;
  std::optional<Witness> best;

  for (const Point& p : anchors) {
    if (!in_domain(p)) throw DomainError("K-inf-compactness anchor outside Dom");
    const SetDesc at = m(p);
    const auto probes = keep_inside(generate_probes(p, probe_cfg), in_domain);

    // (i) lower semicontinuity of u at (p, y), with y_n the nearest point of m(p_n).
    for (double y : detail::representative_points(at, cfg.grid, 5, verdict.truncated)) {
      std::vector<SequenceProbe> joint;
      for (const SequenceProbe& pr : probes) {
        std::vector<Point> pts;
        std::vector<double> offset;
        for (const Point& q : pr.points) {
          Point j = q;
          j.push_back(m(q).project(y));
          offset.push_back(std::abs(j.back() - y));
          pts.push_back(std::move(j));
        }
        // only sequences that converge to (p, y) in the graph
        if (assess_tail(offset, cfg.tol, cfg.persistence).counterexample) continue;
        Point anchor = p;
        anchor.push_back(y);
        joint.push_back(custom_probe(std::move(anchor), std::move(pts), {}, pr.label + " (graph)"));
      }
      auto joint_u = [&](const Point& q) {
        Point head(q.begin(), q.end() - 1);
        return u(head, q.back());
      };
      Point anchor = p;
      anchor.push_back(y);
      Verdict lsc = check_function_semicontinuity(joint_u, [](const Point&) { return true; }, anchor, Side::Lower,
                                                  joint, cfg);
      if (lsc.counterexample()) {
        lsc.witness->detail = fmt::format("condition (i): u is not lsc at graph point y = {}", y);
        detail::consider(best, std::move(*lsc.witness));
      }
    }

    // (ii) bounded sub-level sequences must cluster in m(p).
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const SequenceProbe& probe = probes[k];
      ++verdict.probes_tested;
      const std::size_t n_all = probe.size();
      const std::size_t start = n_all - n_all / 2;
      struct Track {
        std::vector<std::size_t> idx;
        std::vector<double> y, uval, dist;
      } argmin, farthest;
      for (std::size_t n = start; n < n_all; ++n) {
        const Point& q = probe.points[n];
        const auto scan = minimax::detail::scan_extremum([&](double y) { return ExtReal(detail::to_real(u(q, y))); },
                                                         m(q), Mode::Inf, cfg.grid);
        if (!(scan.result.value <= ExtReal(cap.lambda))) continue;
        const minimax::detail::Sample* amin = nullptr;
        const minimax::detail::Sample* far = nullptr;
        double far_d = -1.0;
        for (const auto& part : scan.samples) {
          for (const auto& smp : part) {
            if (!(smp.v <= ExtReal(cap.lambda))) continue;
            if (!amin || smp.v < amin->v) amin = &smp;
            const double dd = at.dist(smp.t).to_double();
            if (dd > far_d || (dd == far_d && std::abs(smp.t) > std::abs(far->t))) {
              far_d = dd;
              far = &smp;
            }
          }
        }
        argmin.idx.push_back(n + 1);
        argmin.y.push_back(amin->t);
        argmin.uval.push_back(amin->v.to_double());
        argmin.dist.push_back(at.dist(amin->t).to_double());
        farthest.idx.push_back(n + 1);
        farthest.y.push_back(far->t);
        farthest.uval.push_back(far->v.to_double());
        farthest.dist.push_back(far_d);
      }
      // sub-level points must exist along a subsequence covering half the tail
      if (argmin.idx.size() * 2 < n_all - start) continue;

      // minimizers first; farthest sub-level points only when they do not already fail
      bool failed = false;
      for (const Track* tr : {&argmin, &farthest}) {
        if (failed) break;
        const char* which = tr == &argmin ? "minimizers" : "farthest sub-level points";
        bool increasing = true;
        for (std::size_t i = 1; i < tr->y.size(); ++i)
          increasing = increasing && std::abs(tr->y[i]) > std::abs(tr->y[i - 1]);
        const bool escapes = increasing && std::abs(tr->y.back()) > cfg.grid.truncation_radius;
        if (escapes) {
          std::vector<double> mags;
          for (double y : tr->y) mags.push_back(std::abs(y));
          Witness w{k, probe, tr->idx, mags, tr->uval,
                    fmt::format("condition (ii): {} diverge (|y_n| from {} to {}); values: u(p_n, y_n)", which,
                                mags.front(), mags.back())};
          detail::consider(best, std::move(w));
          failed = true;
          continue;
        }
        TailAssessment t = assess_window(tr->dist, tr->idx.front(), cfg.tol, cfg.persistence);
        if (t.counterexample) {
          Witness w{k, probe, tr->idx, tr->dist, tr->uval,
                    fmt::format("condition (ii): {} stay away from m(p); values: u(p_n, y_n)", which)};
          detail::consider(best, std::move(w));
          failed = true;
        }
      }
    }
  }
  if (best) {
    verdict.outcome = Outcome::CounterexampleFound;
    verdict.witness = std::move(best);
  }
  return verdict;
}

/// Inf-compactness of f on S: for each cap, sub-level points found in the
/// outermost probed band of an unbounded direction mean the level set is not
/// bounded. Closedness is only spot-checked at sampled boundary points and
/// reported in the verdict detail.
template <typename F>
Verdict check_inf_compact(F&& f, const SetDesc& s, const std::vector<LevelCap>& caps, const GridSpec& scan) {
  if (s.is_empty()) throw EmptySetError("inf-compactness over the empty set");
  Verdict verdict;
  verdict.property = "inf-compact";
  std::optional<Witness> best;
  std::string advisory;
  for (const LevelCap& cap : caps) {
    ++verdict.probes_tested;
    std::vector<double> escaping;
    for (const Part& part : s.parts()) {
      const auto plan = minimax::detail::plan_part(part, scan);
      const int outer = plan.bands;
      for (std::size_t j = 0; j < plan.nodes.size(); ++j) {
        const bool outermost = outer > 0 && std::abs(plan.band[j]) == outer &&
                               ((plan.band[j] > 0 && plan.unbounded_up) || (plan.band[j] < 0 && plan.unbounded_down));
        if (!outermost) continue;
        if (ExtReal(detail::to_real(f(plan.nodes[j]))) <= ExtReal(cap.lambda)) escaping.push_back(plan.nodes[j]);
      }
      // open finite endpoints whose limit value is below the cap make the level set non-closed
      for (auto [end, closed, dir] : {std::tuple{part.lo, part.lo_closed, +1}, std::tuple{part.hi, part.hi_closed, -1}}) {
        if (!std::isfinite(end) || closed) continue;
        const double near = minimax::detail::inner_point(end, false, dir);
        if (ExtReal(detail::to_real(f(near))) <= ExtReal(cap.lambda))
          advisory = fmt::format("advisory: level set for lambda = {} may not be closed near {}", cap.lambda, end);
      }
    }
    if (!escaping.empty()) {
      SequenceProbe probe;
      probe.label = fmt::format("level set lambda = {}", cap.lambda);
      std::vector<std::size_t> idx(escaping.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
      std::vector<double> mags;
      for (double t : escaping) mags.push_back(std::abs(t));
      detail::consider(best, Witness{verdict.probes_tested - 1, probe, idx, mags, escaping,
                                     fmt::format("sub-level points beyond radius {}", scan.probed_radius() / 2)});
    }
  }
  verdict.note = advisory;
  if (best) {
    verdict.outcome = Outcome::CounterexampleFound;
    verdict.witness = std::move(best);
  }
  return verdict;
}

}  // namespace minimax::diag

#endif  // MINIMAX_DIAGNOSTICS_HPP
