#ifndef MINIMAX_SET_DESC_HPP
#define MINIMAX_SET_DESC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "minimax/errors.hpp"
#include "minimax/ext_real.hpp"

namespace minimax {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One connected piece of a subset of the real line. Infinite endpoints are
/// always open.
struct Part {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool empty() const noexcept {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
  }
  bool contains(double v) const noexcept {
    const bool above = lo_closed ? v >= lo : v > lo;
    const bool below = hi_closed ? v <= hi : v < hi;
    return above && below;
  }
  double dist(double v) const noexcept {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
  }
  bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

  friend bool operator==(const Part&, const Part&) = default;
};

/// Normalized description of a subset of the real line: a sorted list of
/// pairwise disjoint, non-touching, nonempty parts.
///
/// The named shapes (empty, singleton, interval, half-line, finite union) are
/// views on this one representation, see kind().
class SetDesc {
public:
  enum class Kind { Empty, Singleton, Interval, HalfLine, FiniteUnion, Unbounded };

  SetDesc() = default;

  static SetDesc empty() { return {}; }
  static SetDesc singleton(double v) { return from_parts({Part{v, v, true, true}}); }
  static SetDesc interval(double lo, double hi, bool lo_closed = true, bool hi_closed = true) {
    return from_parts({Part{lo, hi, lo_closed && std::isfinite(lo), hi_closed && std::isfinite(hi)}});
  }
  /// [lo, +inf) or (lo, +inf).
  static SetDesc half_line(double lo, bool lo_closed = true) {
    return from_parts({Part{lo, kInf, lo_closed, false}});
  }
  static SetDesc real_line() { return from_parts({Part{-kInf, kInf, false, false}}); }

  static SetDesc from_parts(std::vector<Part> parts) {
    SetDesc s;
    s.parts_ = std::move(parts);
    s.normalize();
    return s;
  }

  static SetDesc unite(const SetDesc& l, const SetDesc& r) {
    std::vector<Part> parts = l.parts_;
    parts.insert(parts.end(), r.parts_.begin(), r.parts_.end());
    return from_parts(std::move(parts));
  }

  static SetDesc intersect(const SetDesc& l, const SetDesc& r) {
    std::vector<Part> out;
    for (const Part& p : l.parts_) {
      for (const Part& q : r.parts_) {
        Part c;
        if (p.lo > q.lo) { c.lo = p.lo; c.lo_closed = p.lo_closed; }
        else if (q.lo > p.lo) { c.lo = q.lo; c.lo_closed = q.lo_closed; }
        else { c.lo = p.lo; c.lo_closed = p.lo_closed && q.lo_closed; }
        if (p.hi < q.hi) { c.hi = p.hi; c.hi_closed = p.hi_closed; }
        else if (q.hi < p.hi) { c.hi = q.hi; c.hi_closed = q.hi_closed; }
        else { c.hi = p.hi; c.hi_closed = p.hi_closed && q.hi_closed; }
        out.push_back(c);
      }
    }
    return from_parts(std::move(out));
  }

  const std::vector<Part>& parts() const noexcept { return parts_; }
  bool is_empty() const noexcept { return parts_.empty(); }

  Kind kind() const noexcept {
    if (parts_.empty()) return Kind::Empty;
    if (parts_.size() > 1) return Kind::FiniteUnion;
    const Part& p = parts_.front();
    if (p.lo == p.hi) return Kind::Singleton;
    if (p.bounded()) return Kind::Interval;
    if (std::isfinite(p.lo)) return Kind::HalfLine;
    return Kind::Unbounded;
  }

  bool member(double v) const noexcept {
    return std::any_of(parts_.begin(), parts_.end(), [v](const Part& p) { return p.contains(v); });
  }

  /// Infimum of |v - w| over members w; +inf for the empty set.
  ExtReal dist(double v) const {
    if (parts_.empty()) return ExtReal::pos_inf();
    double best = kInf;
    for (const Part& p : parts_) best = std::min(best, p.dist(v));
    return ExtReal(best);
  }

  /// Intersection with [-radius, radius].
  SetDesc truncate(double radius) const {
    return intersect(*this, interval(-radius, radius));
  }

  SetDesc closure() const {
    std::vector<Part> out = parts_;
    for (Part& p : out) {
      p.lo_closed = std::isfinite(p.lo);
      p.hi_closed = std::isfinite(p.hi);
    }
    return from_parts(std::move(out));
  }

  /// Smallest and largest boundary points of the hull; the set must be nonempty.
  double lower() const {
    if (parts_.empty()) throw EmptySetError("lower() of the empty set");
    return parts_.front().lo;
  }
  double upper() const {
    if (parts_.empty()) throw EmptySetError("upper() of the empty set");
    return parts_.back().hi;
  }
  bool bounded() const noexcept {
    return parts_.empty() || (std::isfinite(parts_.front().lo) && std::isfinite(parts_.back().hi));
  }

  /// Nearest point of the closure to v.
  double project(double v) const {
    if (parts_.empty()) throw EmptySetError("project() onto the empty set");
    double best = parts_.front().lo;
    double best_d = kInf;
    for (const Part& p : parts_) {
      const double w = std::clamp(v, p.lo, p.hi);
      const double d = std::abs(v - w);
      if (d < best_d) { best_d = d; best = w; }
    }
    return best;
  }

  /// True when every part of this set lies within the closure of `other`
  /// enlarged by `tol`.
  bool subset_of_closure(const SetDesc& other, double tol = 0.0) const {
    const SetDesc cl = other.closure();
    for (const Part& p : parts_) {
      const bool inside = std::any_of(cl.parts_.begin(), cl.parts_.end(), [&](const Part& q) {
        return p.lo >= q.lo - tol && p.hi <= q.hi + tol;
      });
      if (!inside) return false;
    }
    return true;
  }

  /// Largest distance from a point of this set to `other` (Hausdorff excess);
  /// +inf if this set is unbounded in a direction `other` is not.
  ExtReal excess_over(const SetDesc& other) const {
    if (parts_.empty()) return ExtReal(0.0);
    if (other.is_empty()) return ExtReal::pos_inf();
    double worst = 0.0;
    const SetDesc cl = other.closure();
    for (const Part& p : parts_) {
      for (double end : {p.lo, p.hi}) worst = std::max(worst, cl.dist(end).to_double());
      // interior maxima sit at midpoints of gaps of `other`
      for (std::size_t i = 0; i + 1 < cl.parts_.size(); ++i) {
        const double mid = 0.5 * (cl.parts_[i].hi + cl.parts_[i + 1].lo);
        if (p.contains(mid)) worst = std::max(worst, cl.dist(mid).to_double());
      }
    }
    return std::isinf(worst) ? ExtReal::pos_inf() : ExtReal(worst);
  }

  std::string to_string() const {
    if (parts_.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += " U ";
      const Part& p = parts_[i];
      if (p.lo == p.hi) {
        out += fmt::format("{{{}}}", p.lo);
        continue;
      }
      auto end = [](double v) {
        if (v == kInf) return std::string("+inf");
        if (v == -kInf) return std::string("-inf");
        return fmt::format("{}", v);
      };
      out += fmt::format("{}{}, {}{}", p.lo_closed ? '[' : '(', end(p.lo), end(p.hi), p.hi_closed ? ']' : ')');
    }
    return out;
  }

  friend bool operator==(const SetDesc&, const SetDesc&) = default;

private:
  void normalize() {
    for (Part& p : parts_) {
      if (!std::isfinite(p.lo)) p.lo_closed = false;
      if (!std::isfinite(p.hi)) p.hi_closed = false;
      if (std::isnan(p.lo) || std::isnan(p.hi)) throw DomainError("NaN set endpoint");
    }
    std::erase_if(parts_, [](const Part& p) { return p.empty(); });
    std::sort(parts_.begin(), parts_.end(), [](const Part& a, const Part& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    std::vector<Part> merged;
    for (const Part& p : parts_) {
      if (!merged.empty()) {
        Part& last = merged.back();
        const bool touches = p.lo < last.hi || (p.lo == last.hi && (p.lo_closed || last.hi_closed));
        if (touches) {
          if (p.hi > last.hi) {
            last.hi = p.hi;
            last.hi_closed = p.hi_closed;
          } else if (p.hi == last.hi) {
            last.hi_closed = last.hi_closed || p.hi_closed;
          }
          continue;
        }
      }
      merged.push_back(p);
    }
    parts_ = std::move(merged);
  }

  std::vector<Part> parts_;
};

}  // namespace minimax

#endif  // MINIMAX_SET_DESC_HPP
