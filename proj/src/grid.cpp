#include "kplane/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "kplane/errors.hpp"
#include "kplane/reduction.hpp"

namespace kplane {

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

double frequency(int j, int n, double h) {
  const int shifted = j < n / 2 ? j : j - n;
  return 2.0 * kPi * shifted / (n * h);
}

// In-place 1-D or 2-D transform of row-major data.
void fft_nd(Eigen::ArrayXcd& data, int d, int n, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(n), out(n);
  auto line = [&](Eigen::Index start, Eigen::Index stride) {
    for (int i = 0; i < n; ++i) in[i] = data(start + i * stride);
    if (inverse) fft.inv(out, in);
    else fft.fwd(out, in);
    for (int i = 0; i < n; ++i) data(start + i * stride) = out[i];
  };
  if (d == 1) {
    line(0, 1);
    return;
  }
  for (int r = 0; r < n; ++r) line(static_cast<Eigen::Index>(r) * n, 1);
  for (int c = 0; c < n; ++c) line(c, n);
}

// Cubic B-spline coefficients along one line (mirror boundary).
void spline_prefilter_line(double* s, int n, std::ptrdiff_t stride) {
  const double z = std::sqrt(3.0) - 2.0;
  const int horizon = std::min(n, 40);  // |z|^40 < 1e-22
  double sum = 0.0, zk = 1.0;
  for (int k = 0; k < horizon; ++k, zk *= z) sum += zk * s[k * stride];
  std::vector<double> cp(n);
  cp[0] = sum;
  for (int i = 1; i < n; ++i) cp[i] = s[i * stride] + z * cp[i - 1];
  std::vector<double> cm(n);
  cm[n - 1] = (z / (z * z - 1.0)) * (cp[n - 1] + z * cp[n - 2]);
  for (int i = n - 2; i >= 0; --i) cm[i] = z * (cm[i + 1] - cp[i]);
  for (int i = 0; i < n; ++i) s[i * stride] = 6.0 * cm[i];
}

inline void bspline_weights(double t, double w[4]) {
  // Weights of nodes floor-1 .. floor+2 at fractional offset t in [0, 1).
  const double u = 1.0 - t;
  w[0] = u * u * u / 6.0;
  w[1] = (4.0 - 6.0 * t * t + 3.0 * t * t * t) / 6.0;
  w[2] = (4.0 - 6.0 * u * u + 3.0 * u * u * u) / 6.0;
  w[3] = t * t * t / 6.0;
}

}  // namespace

GridField::GridField(int d, int n, double half_extent, Eigen::ArrayXcd values)
    : d_(d), n_(n), half_extent_(half_extent), values_(std::move(values)) {
  if (d != 1 && d != 2) throw std::invalid_argument("GridField: d must be 1 or 2");
  if (!is_power_of_two(n)) throw std::invalid_argument("GridField: n must be a power of two");
  if (!(half_extent > 0.0)) throw std::invalid_argument("GridField: L must be positive");
  const Eigen::Index size = d == 1 ? n : static_cast<Eigen::Index>(n) * n;
  if (values_.size() != size) throw std::invalid_argument("GridField: wrong number of values");
  if (!values_.allFinite()) throw std::domain_error("GridField: non-finite values");
}

GridField sample_function(int d, int n, double half_extent, const PointFunction& f) {
  const double h = 2.0 * half_extent / n;
  const Eigen::Index size = d == 1 ? n : static_cast<Eigen::Index>(n) * n;
  Eigen::ArrayXcd values(size);
  Eigen::VectorXd x(d);
  if (d == 1) {
    for (int i = 0; i < n; ++i) {
      x(0) = -half_extent + i * h;
      values(i) = f(x);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        x << -half_extent + i * h, -half_extent + j * h;
        values(static_cast<Eigen::Index>(i) * n + j) = f(x);
      }
  }
  return GridField(d, n, half_extent, std::move(values));
}

GridField sample_packet(const GaussianPacket<double>& p, int n, double half_extent) {
  if (p.dim() != 1 && p.dim() != 2) throw std::invalid_argument("sample_packet: d must be 1 or 2");
  return sample_function(p.dim(), n, half_extent, [&](const Eigen::VectorXd& x) {
    return evaluate(p, x);
  });
}

double discrete_mass(const GridField& f) {
  return f.values().abs2().sum() * std::pow(f.step(), f.d());
}

GridField evolve_grid(const GridField& f, double t) {
  if (t == 0.0) return f;
  const int n = f.n();
  const double h = f.step();
  Eigen::ArrayXcd data = f.values();
  fft_nd(data, f.d(), n, false);
  if (f.d() == 1) {
    for (int i = 0; i < n; ++i) data(i) *= std::polar(1.0, -t * std::pow(frequency(i, n, h), 2));
  } else {
    for (int i = 0; i < n; ++i) {
      const double ki = frequency(i, n, h);
      for (int j = 0; j < n; ++j) {
        const double kj = frequency(j, n, h);
        data(static_cast<Eigen::Index>(i) * n + j) *= std::polar(1.0, -t * (ki * ki + kj * kj));
      }
    }
  }
  fft_nd(data, f.d(), n, true);
  return GridField(f.d(), n, f.half_extent(), std::move(data));
}

namespace {

// Largest magnitude on the outermost box ring (centered = false) or on the
// Nyquist ring of an unshifted spectrum (centered = true), relative to the maximum.
double ring_ratio(const Eigen::ArrayXd& mag, int d, int n, bool centered) {
  auto on_ring = [&](int i) { return centered ? i == n / 2 : (i == 0 || i == n - 1); };
  double edge = 0.0;
  if (d == 1) {
    for (int i = 0; i < n; ++i)
      if (on_ring(i)) edge = std::max(edge, mag(i));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (on_ring(i) || on_ring(j)) edge = std::max(edge, mag(static_cast<Eigen::Index>(i) * n + j));
  }
  return edge / mag.maxCoeff();
}

void check_boundary(const GridField& f, double rel) {
  const Eigen::ArrayXd mag = f.values().abs();
  if (!(mag.maxCoeff() > 0.0)) return;
  if (const double r = ring_ratio(mag, f.d(), f.n(), false); r > rel) {
    std::ostringstream msg;
    msg << "field reaches the domain boundary (edge/max = " << r << " > " << rel
        << "); enlarge L";
    throw ResolutionError(msg.str());
  }
}

void check_nyquist(const Eigen::ArrayXcd& spectrum, int d, int n, double rel) {
  const Eigen::ArrayXd mag = spectrum.abs();
  if (!(mag.maxCoeff() > 0.0)) return;
  if (const double r = ring_ratio(mag, d, n, true); r > rel) {
    std::ostringstream msg;
    msg << "spectrum reaches the Nyquist frequency (edge/max = " << r << " > " << rel
        << "); refine the grid";
    throw ResolutionError(msg.str());
  }
}

}  // namespace

void check_envelope(const GridField& f, double rel) {
  check_boundary(f, rel);
  Eigen::ArrayXcd spectrum = f.values();
  fft_nd(spectrum, f.d(), f.n(), false);
  check_nyquist(spectrum, f.d(), f.n(), rel);
}

double SinogramGrid::angle(int a) const { return kPi * a / angles; }

namespace {

// Value at index coordinate v of the cubic spline with coefficients row[0..n)
// (zero outside).
inline double spline_at(const double* row, int n, double v) {
  if (v <= -2.0 || v >= n + 1.0) return 0.0;
  const double fv = std::floor(v);
  double w[4];
  bspline_weights(v - fv, w);
  const int iv = static_cast<int>(fv) - 1;
  if (iv >= 0 && iv + 3 < n) return w[0] * row[iv] + w[1] * row[iv + 1] + w[2] * row[iv + 2] + w[3] * row[iv + 3];
  double acc = 0.0;
  for (int q = 0; q < 4; ++q)
    if (iv + q >= 0 && iv + q < n) acc += w[q] * row[iv + q];
  return acc;
}

}  // namespace

SinogramGrid xray_grid(const GridField& f, int angles) {
  if (f.d() != 2) throw std::invalid_argument("xray_grid: field must be two-dimensional");
  if (angles < 1) throw std::invalid_argument("xray_grid: need at least one angle");
  const Eigen::ArrayXd re = f.values().real();
  if (f.values().imag().abs().maxCoeff() > 1e-12 * std::max(1.0, re.abs().maxCoeff())) {
    throw std::domain_error("xray_grid: field must be real");
  }
  const int n = f.n();
  const double half = f.half_extent();
  const double h = f.step();

  // Lines are sampled where they cross the grid lines of their dominant axis.
  // At those integer knots the tensor spline reduces to the 1-D spline of the
  // data along the other axis, so each array is prefiltered along one axis only.
  // by_row: row i holds the spline coefficients of x_i fixed, along j.
  // by_col: row j holds those of y_j fixed, along i (transposed storage).
  Eigen::ArrayXd by_row = re;
  Eigen::ArrayXd by_col(re.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      by_col(static_cast<Eigen::Index>(j) * n + i) = re(static_cast<Eigen::Index>(i) * n + j);
  for (int r = 0; r < n; ++r) {
    spline_prefilter_line(by_row.data() + static_cast<std::ptrdiff_t>(r) * n, n, 1);
    spline_prefilter_line(by_col.data() + static_cast<std::ptrdiff_t>(r) * n, n, 1);
  }

  SinogramGrid sino;
  sino.angles = angles;
  sino.step = h;
  sino.first_offset = -half * std::sqrt(2.0);
  const int offsets = static_cast<int>(std::ceil(2.0 * std::sqrt(2.0) * half / h));
  sino.values = Eigen::MatrixXd::Zero(angles, offsets);

  parallel_for(static_cast<std::size_t>(angles), [&](std::size_t a) {
    const double theta = sino.angle(static_cast<int>(a));
    const double c = std::cos(theta), s = std::sin(theta);
    // Line: off (-s, c) + y (c, s).
    const bool along_x = std::abs(c) >= std::abs(s);
    const double lead = along_x ? c : s;
    const Eigen::ArrayXd& coef = along_x ? by_row : by_col;
    for (int jo = 0; jo < offsets; ++jo) {
      const double off = sino.offset(jo);
      double sum = 0.0;
      for (int r = 0; r < n; ++r) {
        const double x = -half + r * h;
        // Other coordinate where the line crosses the dominant grid line.
        const double other = along_x ? (off + s * x) / c : (c * x - off) / s;
        sum += spline_at(coef.data() + static_cast<std::ptrdiff_t>(r) * n, n, (other + half) / h);
      }
      sino.values(static_cast<Eigen::Index>(a), jo) = sum * h / std::abs(lead);
    }
  });
  return sino;
}

namespace {

// Spectrum of a datum, evolved on demand. The multiplier has unit modulus, so
// the Nyquist check on the spectrum covers every time at once.
class Propagator {
 public:
  Propagator(const GridField& f, double envelope) : f_(f), spectrum_(f.values()) {
    fft_nd(spectrum_, f.d(), f.n(), false);
    check_nyquist(spectrum_, f.d(), f.n(), envelope);
  }

  GridField at(double t) const {
    if (t == 0.0) return f_;
    const int n = f_.n();
    const double h = f_.step();
    Eigen::ArrayXcd data = spectrum_;
    for (int i = 0; i < n; ++i) {
      const double ki = frequency(i, n, h);
      for (int j = 0; j < n; ++j) {
        const double kj = frequency(j, n, h);
        data(static_cast<Eigen::Index>(i) * n + j) *= std::polar(1.0, -t * (ki * ki + kj * kj));
      }
    }
    fft_nd(data, 2, n, true);
    return GridField(2, n, f_.half_extent(), std::move(data));
  }

 private:
  GridField f_;
  Eigen::ArrayXcd spectrum_;
};

// Space-time functional restricted to one time slice:
// int_0^pi dtheta int ds [X |u|^2]^3 (trapezoid in theta).
double slice_functional(const GridField& u, int angles, double envelope) {
  check_boundary(u, envelope);
  const GridField density(u.d(), u.n(), u.half_extent(), u.values().abs2().cast<Complex>());
  const SinogramGrid sino = xray_grid(density, angles);
  return sino.values.array().cube().sum() * sino.step * kPi / angles;
}

// Clenshaw-Curtis on [a, b] with the panel count doubled until two successive
// rules agree; the Chebyshev nodes are nested, so each doubling evaluates only
// the new half of the nodes.
double clenshaw_curtis(const std::function<double(double)>& g, double a, double b,
                       const Theorem11Options& opt) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto node = [&](int j, int panels) { return mid + half * std::cos(kPi * j / panels); };
  auto rule = [&](const std::vector<double>& f) {
    const int panels = static_cast<int>(f.size()) - 1;
    double total = 0.0;
    for (int j = 0; j <= panels; ++j) {
      double w = 1.0;
      for (int k = 1; k <= panels / 2; ++k) {
        const double bk = 2 * k == panels ? 1.0 : 2.0;
        w -= bk / (4.0 * k * k - 1.0) * std::cos(2.0 * kPi * k * j / panels);
      }
      w *= (j == 0 || j == panels ? 1.0 : 2.0) / panels;
      total += w * f[j];
    }
    return half * total;
  };
  std::vector<double> values{g(node(0, 2)), g(node(1, 2)), g(node(2, 2))};
  double previous = rule(values);
  for (int level = 2; level <= opt.max_levels; ++level) {
    const int panels = 1 << level;
    std::vector<double> next(panels + 1);
    for (int j = 0; j <= panels; ++j) next[j] = j % 2 == 0 ? values[j / 2] : g(node(j, panels));
    values = std::move(next);
    const double now = rule(values);
    if (level >= opt.min_levels && std::abs(now - previous) <= opt.rel_tol * std::abs(now)) return now;
    previous = now;
  }
  throw ConvergenceError("time quadrature did not settle within max_levels",
                         std::abs(rule(values) - previous));
}

double default_split_time(const GridField& f) {
  // sigma_x / (4 sigma_xi) from the second moments of |f|^2 and |f^|^2.
  const int n = f.n();
  const double h = f.step();
  const Eigen::ArrayXd dens = f.values().abs2();
  Eigen::ArrayXcd spec = f.values();
  fft_nd(spec, 2, n, false);
  const Eigen::ArrayXd sdens = spec.abs2();
  double mx = 0, my = 0, mxx = 0, kx = 0, ky = 0, kxx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<Eigen::Index>(i) * n + j;
      const double x = f.coordinate(i), y = f.coordinate(j);
      mx += dens(idx) * x;
      my += dens(idx) * y;
      mxx += dens(idx) * (x * x + y * y);
      const double fx = frequency(i, n, h), fy = frequency(j, n, h);
      kx += sdens(idx) * fx;
      ky += sdens(idx) * fy;
      kxx += sdens(idx) * (fx * fx + fy * fy);
    }
  const double m0 = dens.sum(), k0 = sdens.sum();
  const double var_x = mxx / m0 - (mx * mx + my * my) / (m0 * m0);
  const double var_k = kxx / k0 - (kx * kx + ky * ky) / (k0 * k0);
  return std::sqrt(var_x) / (4.0 * std::sqrt(var_k));
}

// Pseudo-conformal companion at time T: exp(i|x|^2 / 4T) conj(u(x, T)).
GridField conformal_companion(const GridField& u_at_split, double split) {
  const int n = u_at_split.n();
  Eigen::ArrayXcd w(u_at_split.values().size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<Eigen::Index>(i) * n + j;
      const double x = u_at_split.coordinate(i), y = u_at_split.coordinate(j);
      w(idx) = std::polar(1.0, (x * x + y * y) / (4.0 * split)) * std::conj(u_at_split.values()(idx));
    }
  return GridField(2, n, u_at_split.half_extent(), std::move(w));
}

}  // namespace

double theorem11_functional_numeric(const GridField& f, const Theorem11Options& opt) {
  if (f.d() != 2) throw std::invalid_argument("theorem11_functional_numeric: d must be 2");
  if (opt.angles < 1 || opt.min_levels < 1 || opt.max_levels < opt.min_levels || !(opt.rel_tol > 0)) {
    throw std::invalid_argument("theorem11_functional_numeric: bad options");
  }
  const double mass = discrete_mass(f);
  if (!(mass > 0.0)) throw std::domain_error("theorem11_functional_numeric: zero datum");
  const double split = opt.split_time > 0.0 ? opt.split_time : default_split_time(f);

  const Propagator forward(f, opt.envelope);
  const double core = clenshaw_curtis(
      [&](double t) { return slice_functional(forward.at(t), opt.angles, opt.envelope); },
      -split, split, opt);

  // |t| > T: W solves the same equation on (0, T] and int_0^T G(W) = int_T^inf G(u).
  // The backward tail is the forward tail of conj(f).
  double tails = 0.0;
  const GridField reversed(2, f.n(), f.half_extent(), f.values().conjugate());
  for (const GridField* datum : {&f, &reversed}) {
    const Propagator w(conformal_companion(evolve_grid(*datum, split), split), opt.envelope);
    tails += clenshaw_curtis(
        [&](double t) { return slice_functional(w.at(t - split), opt.angles, opt.envelope); },
        0.0, split, opt);
  }
  return (core + tails) / (mass * mass * mass);
}

}  // namespace kplane
