#include "fairagg/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace fairagg {

double utility_eval(const UtilitySpec& spec, double r) {
  if (!std::isfinite(r)) {
    throw DomainError("utility argument must be finite");
  }
  switch (spec.kind()) {
    case UtilityKind::Linear:
      return r;
    case UtilityKind::ReciprocalAbs:
      if (r == 0.0) {
        throw UtilityUndefinedError("utility undefined at optimum (r = 0)");
      }
      return 1.0 / std::abs(r);
    case UtilityKind::LogReciprocalAbs:
      if (r == 0.0) {
        throw UtilityUndefinedError("utility undefined at optimum (r = 0)");
      }
      return std::log(1.0 / std::abs(r));
    case UtilityKind::PiecewiseTable: {
      const auto& pts = spec.points();
      if (r <= pts.front().first) {
        return pts.front().second;
      }
      if (r >= pts.back().first) {
        return pts.back().second;
      }
      auto hi = std::upper_bound(
          pts.begin(), pts.end(), r,
          [](double x, const std::pair<double, double>& pt) { return x < pt.first; });
      auto lo = hi - 1;
      const double t = (r - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
  }
  throw DomainError("unknown utility kind");
}

double overall(const AggregationSpec& spec, const MeasureVector& v) {
  spec.check_covers(v);
  KahanSum total;
  total.add(spec.alpha());
  for (const auto& e : v.entries()) {
    total.add(spec.weight_of(e.measure_id) *
              utility_eval(spec.utility_of(e.measure_id), e.value));
  }
  return total.value();
}

double expected_utility(const FiniteLottery& lottery, const UtilitySpec& utility,
                        const std::string& measure_id) {
  KahanSum total;
  for (const auto& outcome : lottery.support()) {
    total.add(outcome.probability *
              utility_eval(utility, outcome.vector.value_of(measure_id)));
  }
  return total.value();
}

double expected_utility(const FiniteLottery& lottery, const AggregationSpec& spec) {
  KahanSum total;
  for (const auto& outcome : lottery.support()) {
    total.add(outcome.probability * overall(spec, outcome.vector));
  }
  return total.value();
}

ParetoIndifferenceReport check_pareto_indifference(const FiniteLottery& mu,
                                                   const FiniteLottery& nu,
                                                   const AggregationSpec& spec,
                                                   double tol) {
  if (!mu.schema().same_schema(nu.schema())) {
    throw DomainError("lotteries must share one measure schema");
  }
  spec.check_covers(mu.schema());

  ParetoIndifferenceReport report;
  report.premise_holds = true;
  double weight_mass = 0.0;
  for (const auto& [measure_id, utility] : spec.utilities()) {
    const double gap = std::abs(expected_utility(mu, utility, measure_id) -
                                expected_utility(nu, utility, measure_id));
    report.premise_holds = report.premise_holds && gap <= tol;
    weight_mass += std::abs(spec.weight_of(measure_id));
  }
  const double overall_gap =
      std::abs(expected_utility(mu, spec) - expected_utility(nu, spec));
  report.conclusion_holds = overall_gap <= weight_mass * tol + tol;
  return report;
}

SimplexGrid::SimplexGrid(std::size_t dimension, std::size_t resolution)
    : dimension_(dimension), resolution_(resolution) {
  if (dimension_ < 2) {
    throw DomainError("simplex grid needs dimension >= 2");
  }
  if (resolution_ < dimension_) {
    throw DomainError("resolution must be >= dimension for positive weights");
  }
  // Integer compositions of `resolution` into `dimension` strictly positive
  // parts, emitted in lexicographic order of the weight vector.
  const auto k = static_cast<long>(resolution_);
  std::vector<long> parts(dimension_, 1);
  auto emit = [&] {
    std::vector<double> point;
    point.reserve(dimension_);
    for (const long c : parts) {
      point.push_back(static_cast<double>(c) / static_cast<double>(k));
    }
    points_.push_back(std::move(point));
  };
  auto recurse = [&](auto&& self, std::size_t pos, long remaining) -> void {
    if (pos + 1 == dimension_) {
      parts[pos] = remaining;
      emit();
      return;
    }
    const long dims_after = static_cast<long>(dimension_ - 1 - pos);
    for (long c = 1; c <= remaining - dims_after; ++c) {
      parts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, k);
}

SweepResult simplex_sweep(const MeasureVector& v,
                          const std::map<std::string, UtilitySpec>& utilities,
                          std::size_t resolution) {
  SweepResult result;
  result.measure_ids = v.measure_ids();
  result.resolution = resolution;

  // Overall is linear in the weights for a fixed vector, so each grid value
  // is just the weight-utility dot product.
  std::vector<double> measure_utilities;
  measure_utilities.reserve(v.size());
  for (const auto& e : v.entries()) {
    auto it = utilities.find(e.measure_id);
    if (it == utilities.end()) {
      throw DomainError("utility spec missing for measure: " + e.measure_id);
    }
    measure_utilities.push_back(utility_eval(it->second, e.value));
  }
  result.corner_limits = measure_utilities;

  const SimplexGrid grid(v.size(), resolution);
  result.points.reserve(grid.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const auto& w = grid.points()[gi];
    KahanSum value;
    for (std::size_t m = 0; m < w.size(); ++m) {
      value.add(w[m] * measure_utilities[m]);
    }
    result.points.push_back({w, value.value()});
    // Strict comparison keeps the first (lexicographically smallest) maximum.
    if (value.value() > best) {
      best = value.value();
      result.argmax_index = gi;
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  for (std::size_t m = 0; m < sweep.measure_ids.size(); ++m) {
    out << "w_" << sweep.measure_ids[m] << ',';
  }
  out << "overall\n";
  char buffer[64];
  for (const auto& point : sweep.points) {
    for (const double w : point.weights) {
      std::snprintf(buffer, sizeof(buffer), "%.6f", w);
      out << buffer << ',';
    }
    std::snprintf(buffer, sizeof(buffer), "%.6f", point.value);
    out << buffer << '\n';
  }
}

namespace {

struct Rgb {
  double r, g, b;
};

// Linear two-stop scale, low = deep blue, high = warm red.
std::string scale_color(double t) {
  const Rgb low{44.0, 123.0, 182.0};
  const Rgb high{215.0, 25.0, 28.0};
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                static_cast<unsigned>(std::lround(low.r + t * (high.r - low.r))),
                static_cast<unsigned>(std::lround(low.g + t * (high.g - low.g))),
                static_cast<unsigned>(std::lround(low.b + t * (high.b - low.b))));
  return buffer;
}

std::string fmt(double x, const char* spec = "%.2f") {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), spec, x);
  return buffer;
}

}  // namespace

std::string sweep_ternary_svg(const SweepResult& sweep) {
  if (sweep.measure_ids.size() != 3) {
    throw DomainError("ternary heatmap requires exactly three measures");
  }
  const double width = 640.0;
  const double height = 600.0;
  const double side = 500.0;
  const double x0 = (width - side) / 2.0;
  const double y0 = 540.0;
  const double tri_height = side * std::sqrt(3.0) / 2.0;
  // Corner order: measure 0 bottom-left, measure 1 bottom-right, measure 2 top.
  const double ax = x0, ay = y0;
  const double bx = x0 + side, by = y0;
  const double cx = x0 + side / 2.0, cy = y0 - tri_height;

  double lo = sweep.points.front().value;
  double hi = lo;
  for (const auto& p : sweep.points) {
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<polygon points=\"" << fmt(ax) << ',' << fmt(ay) << ' ' << fmt(bx)
      << ',' << fmt(by) << ' ' << fmt(cx) << ',' << fmt(cy)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  for (const auto& point : sweep.points) {
    const double w0 = point.weights[0], w1 = point.weights[1], w2 = point.weights[2];
    const double px = w0 * ax + w1 * bx + w2 * cx;
    const double py = w0 * ay + w1 * by + w2 * cy;
    const double t = (point.value - lo) / span;
    svg << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
        << "\" r=\"2.4\" fill=\"" << scale_color(t) << "\"/>\n";
  }

  svg << "<text x=\"" << fmt(ax - 10.0) << "\" y=\"" << fmt(ay + 24.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\">w_"
      << sweep.measure_ids[0] << " = 1 (limit " << fmt(sweep.corner_limits[0], "%.4f")
      << ")</text>\n"
      << "<text x=\"" << fmt(bx - 150.0) << "\" y=\"" << fmt(by + 24.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\">w_"
      << sweep.measure_ids[1] << " = 1 (limit " << fmt(sweep.corner_limits[1], "%.4f")
      << ")</text>\n"
      << "<text x=\"" << fmt(cx - 80.0) << "\" y=\"" << fmt(cy - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\">w_"
      << sweep.measure_ids[2] << " = 1 (limit " << fmt(sweep.corner_limits[2], "%.4f")
      << ")</text>\n"
      << "<text x=\"16\" y=\"" << fmt(height - 28.0)
      << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\""
      << scale_color(0.0) << "\">min = " << fmt(lo, "%.6f") << "</text>\n"
      << "<text x=\"16\" y=\"" << fmt(height - 8.0)
      << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\""
      << scale_color(1.0) << "\">max = " << fmt(hi, "%.6f") << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace fairagg
