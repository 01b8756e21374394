#include "spintop/fitting.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "spintop/error.hpp"
#include "spintop/log.hpp"

namespace spintop {

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double skew_normal_density(double z, double alpha) {
  return 2.0 * normal_pdf(z) * normal_cdf(alpha * z);
}

double SkewNormalFit::operator()(double x) const {
  return amplitude * skew_normal_density((x - location) / scale, shape);
}

namespace {

// Parameters in normalised units: x' = (x - x0) / xs, y' = y / ys.
// theta = (log A, xi, log omega, alpha).
using Theta = Eigen::Vector4d;

constexpr double kMinLogScale = -9.0;   // omega' >= ~1e-4 of the x-range
constexpr double kMaxLogScale = 4.6;    // omega' <= ~100 x-ranges
constexpr double kMaxShape = 50.0;
constexpr int kMaxIterations = 400;

struct Residuals {
  Eigen::VectorXd r;
  Eigen::Matrix<double, Eigen::Dynamic, 4> jac;
};

Theta clamp(Theta t) {
  t(2) = std::clamp(t(2), kMinLogScale, kMaxLogScale);
  t(3) = std::clamp(t(3), -kMaxShape, kMaxShape);
  t(0) = std::clamp(t(0), -50.0, 50.0);
  return t;
}

double cost(const Theta& t, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double a = std::exp(t(0)), w = std::exp(t(2));
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = a * skew_normal_density((x(i) - t(1)) / w, t(3)) - y(i);
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

Residuals residuals(const Theta& t, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
  const double a = std::exp(t(0)), w = std::exp(t(2)), alpha = t(3);
  Residuals out;
  out.r.resize(x.size());
  out.jac.resize(x.size(), 4);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double z = (x(i) - t(1)) / w;
    const double phi = normal_pdf(z);
    const double phi_a = normal_pdf(alpha * z);
    const double g = 2.0 * phi * normal_cdf(alpha * z);
    const double dg_dz = -z * g + 2.0 * alpha * phi * phi_a;
    out.r(i) = a * g - y(i);
    out.jac(i, 0) = a * g;
    out.jac(i, 1) = -a * dg_dz / w;
    out.jac(i, 2) = -a * dg_dz * z;
    out.jac(i, 3) = a * 2.0 * phi * z * phi_a;
  }
  return out;
}

struct DescentResult {
  Theta theta;
  double mse = 0.0;
  std::vector<double> trace;  // mse after each iteration
};

DescentResult levenberg_marquardt(Theta theta, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y) {
  theta = clamp(theta);
  double current = cost(theta, x, y);
  double lambda = 1e-3;
  DescentResult out;
  out.trace.push_back(current);
  for (int it = 0; it < kMaxIterations; ++it) {
    const Residuals res = residuals(theta, x, y);
    const Eigen::Matrix4d jtj = res.jac.transpose() * res.jac;
    const Eigen::Vector4d grad = res.jac.transpose() * res.r;
    if (grad.lpNorm<Eigen::Infinity>() < 1e-15 || current == 0.0) break;

    bool improved = false;
    while (lambda < 1e14) {
      Eigen::Matrix4d lhs = jtj;
      for (int k = 0; k < 4; ++k) lhs(k, k) += lambda * (jtj(k, k) + 1e-12);
      const Theta trial = clamp(theta + lhs.ldlt().solve(-grad));
      const double c = cost(trial, x, y);
      if (std::isfinite(c) && c < current) {
        const double drop = current - c;
        theta = trial;
        current = c;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        if (drop <= 1e-15 * current) lambda = 1e14;  // stalled: finish
        break;
      }
      lambda *= 4.0;
    }
    out.trace.push_back(current);
    if (!improved || lambda >= 1e14) break;
  }
  out.theta = theta;
  out.mse = current;
  return out;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double curve_peak(const SkewNormalFit& fit, double lo, double hi) {
  if (!(hi > lo)) return lo;
  constexpr int kGrid = 4000;
  const double step = (hi - lo) / kGrid;
  int best = 0;
  double best_y = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = fit(lo + step * i);
    if (v > best_y) {
      best_y = v;
      best = i;
    }
  }
  // Golden-section refinement inside the bracketing grid cells.
  double a = lo + step * std::max(best - 1, 0);
  double b = lo + step * std::min(best + 1, kGrid);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  for (int i = 0; i < 100 && b - a > 1e-12 * (1.0 + std::abs(a)); ++i) {
    if (fit(c) > fit(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  const double refined = 0.5 * (a + b);
  const double grid_x = lo + step * best;
  return fit(refined) >= fit(grid_x) ? refined : grid_x;
}

}  // namespace

SkewNormalFit fit_skew_normal(std::span<const Point> points) {
  if (points.size() < 5) {
    throw ConfigError("skew-normal fit needs at least 5 points, got " +
                      std::to_string(points.size()));
  }
  double xmin = points[0].x, xmax = points[0].x, ymax = 0.0;
  for (const Point& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ConfigError("skew-normal fit: non-finite point");
    }
    if (p.y < 0.0) throw ConfigError("skew-normal fit: negative y");
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  if (ymax == 0.0) throw ConfigError("skew-normal fit: all y are zero");

  const double xs = xmax > xmin ? xmax - xmin : 1.0;
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd x(n), y(n);
  std::vector<double> xv(points.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = (points[static_cast<std::size_t>(i)].x - xmin) / xs;
    y(i) = points[static_cast<std::size_t>(i)].y / ymax;
    xv[static_cast<std::size_t>(i)] = x(i);
  }

  std::vector<Theta> starts;
  for (double q : {0.25, 0.5, 0.75}) {
    for (double w : {1.0 / 8.0, 1.0 / 4.0}) {
      for (double alpha : {-3.0, 0.0, 3.0}) {
        double gmax = 0.0;  // peak of the unit-amplitude density for this alpha
        for (int k = -400; k <= 400; ++k) {
          gmax = std::max(gmax, skew_normal_density(k / 100.0, alpha));
        }
        starts.push_back(Theta(std::log(1.0 / gmax), quantile(xv, q),
                               std::log(w), alpha));
      }
    }
  }

  std::vector<std::future<DescentResult>> jobs;
  for (const Theta& s : starts) {
    jobs.push_back(std::async(std::launch::async, levenberg_marquardt, s,
                              std::cref(x), std::cref(y)));
  }
  SkewNormalFit fit;
  std::optional<DescentResult> best;
  double running = std::numeric_limits<double>::infinity();
  const double y2 = ymax * ymax;
  for (auto& j : jobs) {
    DescentResult r = j.get();
    for (double c : r.trace) {
      running = std::min(running, c);
      fit.best_mse_trace.push_back(running * y2);
    }
    if (!best || r.mse < best->mse) best = std::move(r);
  }

  fit.amplitude = std::exp(best->theta(0)) * ymax;
  fit.location = xmin + best->theta(1) * xs;
  fit.scale = std::exp(best->theta(2)) * xs;
  fit.shape = best->theta(3);
  double sse = 0.0;
  for (const Point& p : points) {
    const double d = fit(p.x) - p.y;
    sse += d * d;
  }
  fit.mse = sse / static_cast<double>(points.size());
  fit.peak_x = curve_peak(fit, xmin, xmax);
  return fit;
}

bool is_unimodal(std::span<const double> ys) {
  std::size_t i = 0;
  while (i + 1 < ys.size() && ys[i + 1] >= ys[i]) ++i;
  while (i + 1 < ys.size() && ys[i + 1] <= ys[i]) ++i;
  return i + 1 >= ys.size();
}

double LinearMap::inverse_translate(double y) const {
  if (slope == 0.0) throw ConfigError("linear map with zero slope has no inverse");
  return (y - intercept) / slope;
}

LinearMap fit_linear_map(std::span<const Point> pairs) {
  if (pairs.empty()) throw ConfigError("linear map needs at least two distinct x");
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const Point& p : pairs) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Point& p : pairs) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
    syy += (p.y - my) * (p.y - my);
  }
  if (sxx == 0.0) throw ConfigError("linear map needs at least two distinct x");

  LinearMap map;
  map.n = pairs.size();
  map.slope = sxy / sxx;
  map.intercept = my - map.slope * mx;
  double sse = 0.0;
  for (const Point& p : pairs) {
    const double d = p.y - map.translate(p.x);
    sse += d * d;
  }
  map.residual_std = std::sqrt(sse / n);
  map.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  if (map.slope <= 0.0) {
    warn("linear rating map has non-positive slope " + std::to_string(map.slope));
  }
  return map;
}

std::int64_t EloHistogram::total() const {
  std::int64_t t = overflow;
  for (auto c : counts) t += c;
  return t;
}

EloHistogram elo_histogram(std::span<const GameRecord> records,
                           const BinScheme& scheme) {
  EloHistogram h;
  h.counts.assign(scheme.size(), 0);
  auto add = [&](int rating) {
    if (auto b = scheme.locate(rating)) {
      ++h.counts[*b];
    } else {
      ++h.overflow;
    }
  };
  for (const GameRecord& r : records) {
    add(r.white_rating);
    add(r.black_rating);
  }
  return h;
}

const char* to_string(RatingTable::System s) {
  switch (s) {
    case RatingTable::System::Lichess: return "lichess";
    case RatingTable::System::Uscf: return "uscf";
    case RatingTable::System::Fide: return "fide";
  }
  return "";
}

const std::vector<std::optional<double>>& RatingTable::column(System s) const {
  switch (s) {
    case System::Lichess: return lichess;
    case System::Uscf: return uscf;
    case System::Fide: return fide;
  }
  return lichess;
}

std::vector<Point> RatingTable::pairs(System from, System to) const {
  const auto& a = column(from);
  const auto& b = column(to);
  std::vector<Point> out;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] && b[i]) out.push_back({*a[i], *b[i]});
  }
  return out;
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

RatingTable read_rating_table(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw DataError("rating table: missing header");

  std::array<std::optional<std::size_t>, 3> col;
  const std::array<const char*, 3> names{"lichess", "uscf", "fide"};
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string h = header[i];
    std::transform(h.begin(), h.end(), h.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (std::size_t k = 0; k < 3; ++k) {
      if (h == names[k]) col[k] = i;
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (!col[k]) throw DataError(std::string("rating table: missing column ") + names[k]);
  }

  RatingTable table;
  std::array<std::vector<std::optional<double>>*, 3> dest{&table.lichess, &table.uscf,
                                                         &table.fide};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t c = *col[k];
      if (c >= cells.size() || cells[c].empty()) {
        dest[k]->push_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      const std::string& s = cells[c];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw DataError("rating table line " + std::to_string(line_no) +
                        ": bad value '" + s + "'");
      }
      dest[k]->push_back(v);
    }
  }
  return table;
}

}  // namespace spintop
