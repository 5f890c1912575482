// SPDX-License-Identifier: Apache-2.0

#include "msd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace msd
{

ComponentError component_error(const ComplexField &psi, const ComplexField &reference)
{
  if (!(psi.grid() == reference.grid()))
  {
    throw std::invalid_argument("component_error: fields live on different grids");
  }
  ComponentError e;
  for (std::size_t i = 0; i < psi.size(); ++i)
  {
    e.real = std::max(e.real, std::abs(psi[i].real() - reference[i].real()));
    e.imag = std::max(e.imag, std::abs(psi[i].imag() - reference[i].imag()));
    e.mod2 = std::max(e.mod2, std::abs(mod2(psi[i]) - mod2(reference[i])));
  }
  return e;
}

ComponentError component_error(const ComplexField &psi,
                               const std::function<cplx(const Point &, double)> &reference,
                               double t)
{
  const Grid &g = psi.grid();
  ComponentError e;
  for (std::size_t i = 0; i < psi.size(); ++i)
  {
    const cplx ref = reference(g.coord(i), t);
    e.real = std::max(e.real, std::abs(psi[i].real() - ref.real()));
    e.imag = std::max(e.imag, std::abs(psi[i].imag() - ref.imag()));
    e.mod2 = std::max(e.mod2, std::abs(mod2(psi[i]) - mod2(ref)));
  }
  return e;
}

void ErrorSeries::push(double t, const ComponentError &e)
{
  if (!times_.empty() && !(t > times_.back()))
  {
    throw std::invalid_argument("ErrorSeries times must be strictly increasing");
  }
  times_.push_back(t);
  samples_.push_back(e);
}

ComponentError ErrorSeries::max() const
{
  ComponentError m;
  for (const auto &e : samples_)
  {
    m.real = std::max(m.real, e.real);
    m.imag = std::max(m.imag, e.imag);
    m.mod2 = std::max(m.mod2, e.mod2);
  }
  return m;
}

double ErrorSeries::component_average() const
{
  const auto m = max();
  return 0.5 * (m.real + m.imag);
}

double ErrorSeries::mean_component_average() const
{
  if (samples_.empty())
  {
    return 0.0;
  }
  double sum = 0.0;
  for (const auto &e : samples_)
  {
    sum += 0.5 * (e.real + e.imag);
  }
  return sum / double(samples_.size());
}

void ErrorSeries::write_csv(const std::string &path) const
{
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot open " + path);
  }
  os << "t,err_real_max,err_imag_max,err_mod2_max\n" << std::setprecision(17) << std::scientific;
  for (std::size_t i = 0; i < times_.size(); ++i)
  {
    os << times_[i] << ',' << samples_[i].real << ',' << samples_[i].imag << ','
       << samples_[i].mod2 << '\n';
  }
}

namespace
{

// Least-squares fit of c0 + c1 u + c2 v + c3 u^2 + c4 v^2 + c5 u v over u, v in
// {-1, 0, 1}; returns the offset of the stationary point in cell units, or (0, 0) when
// the fit has no minimum.
Vec2 paraboloid_offset(const double z[3][3])
{
  double su = 0, sv = 0, suv = 0, suu = 0, svv = 0, s0 = 0;
  for (int dv = -1; dv <= 1; ++dv)
  {
    for (int du = -1; du <= 1; ++du)
    {
      const double w = z[dv + 1][du + 1];
      s0 += w;
      su += du * w;
      sv += dv * w;
      suv += du * dv * w;
      suu += du * du * w;
      svv += dv * dv * w;
    }
  }
  const double c1 = su / 6.0;
  const double c2 = sv / 6.0;
  const double c5 = suv / 4.0;
  const double diff = (suu - svv) / 2.0;
  const double sum = (suu + svv - 4.0 * s0 / 3.0) / 2.0;
  const double c3 = 0.5 * (sum + diff);
  const double c4 = 0.5 * (sum - diff);
  const double det = 4.0 * c3 * c4 - c5 * c5;
  if (!(det > 0.0) || !(c3 > 0.0))
  {
    return {};
  }
  Vec2 d{(-2.0 * c4 * c1 + c5 * c2) / det, (-2.0 * c3 * c2 + c5 * c1) / det};
  d.x = std::clamp(d.x, -1.0, 1.0);
  d.y = std::clamp(d.y, -1.0, 1.0);
  return d;
}

}  // namespace

std::vector<Vec2> track_vortices(const ComplexField &psi, int n, const TrackOptions &opts)
{
  const Grid &g = psi.grid();
  if (g.dim() != 2)
  {
    throw std::invalid_argument("track_vortices requires a 2D field");
  }
  if (n < 1)
  {
    throw std::invalid_argument("track_vortices: requested count must be >= 1");
  }
  const int nx = g.shape(0);
  const int ny = g.shape(1);
  const double limit = opts.threshold_fraction * opts.rho;
  auto dens = [&](int i, int j) { return mod2(psi[g.index(i, j)]); };

  struct Candidate
  {
    double value;
    int i, j;
  };
  std::vector<Candidate> cands;
  for (int j = 1; j < ny - 1; ++j)
  {
    for (int i = 1; i < nx - 1; ++i)
    {
      const double v = dens(i, j);
      if (!(v < limit))
      {
        continue;
      }
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj)
      {
        for (int di = -1; di <= 1; ++di)
        {
          if ((di || dj) && dens(i + di, j + dj) < v)
          {
            is_min = false;
            break;
          }
        }
      }
      if (is_min)
      {
        cands.push_back({v, i, j});
      }
    }
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate &a, const Candidate &b) { return a.value < b.value; });

  // Plateaus of equal values (a core between grid points) yield adjacent candidates;
  // keep only the deepest within two cells.
  std::vector<Candidate> kept;
  for (const auto &c : cands)
  {
    const bool near = std::any_of(kept.begin(), kept.end(), [&](const Candidate &k)
                                  { return std::abs(k.i - c.i) <= 2 && std::abs(k.j - c.j) <= 2; });
    if (!near)
    {
      kept.push_back(c);
    }
    if (int(kept.size()) == n)
    {
      break;
    }
  }
  if (int(kept.size()) < n)
  {
    std::ostringstream os;
    os << "found " << kept.size() << " vortex cores, expected " << n;
    throw VortexLostError(os.str());
  }

  std::vector<Vec2> out;
  out.reserve(kept.size());
  for (const auto &c : kept)
  {
    double z[3][3];
    for (int dj = -1; dj <= 1; ++dj)
    {
      for (int di = -1; di <= 1; ++di)
      {
        z[dj + 1][di + 1] = dens(c.i + di, c.j + dj);
      }
    }
    const Vec2 d = paraboloid_offset(z);
    out.push_back({g.coord(0, c.i) + d.x * g.spacing(0), g.coord(1, c.j) + d.y * g.spacing(1)});
  }
  return out;
}

void VortexTrack::push(double t, std::vector<Vec2> positions)
{
  if (!times_.empty())
  {
    if (!(t > times_.back()))
    {
      throw std::invalid_argument("VortexTrack times must be strictly increasing");
    }
    const auto &prev = positions_.back();
    if (positions.size() != prev.size())
    {
      throw std::invalid_argument("VortexTrack: vortex count changed between frames");
    }
    // Smallest total displacement over all assignments (counts here are tiny).
    std::vector<std::size_t> perm(positions.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do
    {
      double cost = 0.0;
      for (std::size_t v = 0; v < perm.size(); ++v)
      {
        cost += std::hypot(positions[perm[v]].x - prev[v].x, positions[perm[v]].y - prev[v].y);
      }
      if (cost < best_cost)
      {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<Vec2> ordered(positions.size());
    for (std::size_t v = 0; v < best.size(); ++v)
    {
      ordered[v] = positions[best[v]];
    }
    positions = std::move(ordered);
  }
  times_.push_back(t);
  positions_.push_back(std::move(positions));
}

std::vector<double> VortexTrack::radius(std::size_t vortex, const Vec2 &center) const
{
  std::vector<double> r;
  r.reserve(times_.size());
  for (const auto &frame : positions_)
  {
    r.push_back(std::hypot(frame[vortex].x - center.x, frame[vortex].y - center.y));
  }
  return r;
}

void VortexTrack::write_csv(const std::string &path, const Vec2 &center) const
{
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot open " + path);
  }
  os << 't';
  for (std::size_t v = 0; v < count(); ++v)
  {
    os << ",x_" << v << ",y_" << v;
  }
  for (std::size_t v = 0; v < count(); ++v)
  {
    os << ",radius_" << v;
  }
  os << '\n' << std::setprecision(17) << std::scientific;
  for (std::size_t f = 0; f < times_.size(); ++f)
  {
    os << times_[f];
    for (const auto &p : positions_[f])
    {
      os << ',' << p.x << ',' << p.y;
    }
    for (const auto &p : positions_[f])
    {
      os << ',' << std::hypot(p.x - center.x, p.y - center.y);
    }
    os << '\n';
  }
}

double radius_deviation(const VortexTrack &track, const Vec2 &center)
{
  if (track.empty())
  {
    throw std::invalid_argument("radius_deviation: empty track");
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < track.count(); ++v)
  {
    const auto r = track.radius(v, center);
    for (const double rv : r)
    {
      worst = std::max(worst, std::abs(rv - r.front()) / r.front() * 100.0);
    }
  }
  return worst;
}

double boundary_mod2_drift(const ComplexField &initial, const ComplexField &current,
                           const BoundaryMap &map)
{
  double worst = 0.0;
  for (const auto &pair : map.pairs)
  {
    worst = std::max(worst, std::abs(mod2(current[pair.b]) - mod2(initial[pair.b])));
  }
  return worst;
}

std::vector<double> boundary_mod2_drift(const std::vector<ComplexField> &series,
                                        const BoundaryMap &map)
{
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto &f : series)
  {
    out.push_back(boundary_mod2_drift(series.front(), f, map));
  }
  return out;
}

namespace
{

// Returns the residual sum of squares and the coefficients (z0, v, A, B) at angular frequency w.
std::pair<double, Eigen::Vector4d> fit_at(const Eigen::VectorXd &t, const Eigen::VectorXd &z, double w)
{
  Eigen::MatrixXd basis(t.size(), 4);
  basis.col(0).setOnes();
  basis.col(1) = t;
  basis.col(2) = (w * t.array()).sin().matrix();
  basis.col(3) = (w * t.array()).cos().matrix();
  const Eigen::Vector4d c = basis.colPivHouseholderQr().solve(z);
  return {(basis * c - z).squaredNorm(), c};
}

}  // namespace

DriftFit fit_drift_with_oscillation(const std::vector<double> &t, const std::vector<double> &z, double min_period,
                                    double max_period)
{
  if (t.size() != z.size() || t.size() < 8)
  {
    throw std::invalid_argument("fit_drift_with_oscillation: need at least 8 matching samples");
  }
  if (!(min_period > 0.0) || !(max_period > min_period))
  {
    throw std::invalid_argument("fit_drift_with_oscillation: bad period range");
  }
  const Eigen::VectorXd tv = Eigen::Map<const Eigen::VectorXd>(t.data(), Eigen::Index(t.size()));
  const Eigen::VectorXd zv = Eigen::Map<const Eigen::VectorXd>(z.data(), Eigen::Index(z.size()));

  // coarse scan in frequency, then golden-section refinement around the best cell
  const double w_lo = 2.0 * std::numbers::pi / max_period, w_hi = 2.0 * std::numbers::pi / min_period;
  constexpr int kScan = 400;
  const double dw = (w_hi - w_lo) / kScan;
  int best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= kScan; ++n)
  {
    const double rss = fit_at(tv, zv, w_lo + n * dw).first;
    if (rss < best_rss)
    {
      best_rss = rss;
      best = n;
    }
  }
  double a = w_lo + std::max(best - 1, 0) * dw, b = w_lo + std::min(best + 1, kScan) * dw;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fit_at(tv, zv, c).first, fd = fit_at(tv, zv, d).first;
  for (int it = 0; it < 60; ++it)
  {
    if (fc < fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fit_at(tv, zv, c).first;
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fit_at(tv, zv, d).first;
    }
  }
  const double w = 0.5 * (a + b);
  const auto [rss, coef] = fit_at(tv, zv, w);
  return {coef[1], 2.0 * std::numbers::pi / w, std::sqrt(rss / double(t.size()))};
}

}  // namespace msd
