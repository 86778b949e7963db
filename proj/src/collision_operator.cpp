#include "geps/collision_operator.hpp"

#include "geps/collision_geometry.hpp"
#include "geps/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace geps {

QuadratureSpec QuadratureSpec::make(int m_phi) {
  QuadratureSpec q;
  q.m_phi = m_phi;
  q.validate();
  return q;
}

void QuadratureSpec::validate() const {
  if (m_phi < 8 || m_phi % 2 != 0)
    throw std::invalid_argument("quadrature: m_phi must be an even integer >= 8, got " + std::to_string(m_phi));
}

namespace {

using Lattice = std::array<int, 3>;

// One representative d of each +-d pair, in a fixed order.
std::vector<Lattice> half_space(int n) {
  std::vector<Lattice> out;
  for (int dz = 0; dz < n; ++dz)
    for (int dy = -(n - 1); dy < n; ++dy)
      for (int dx = -(n - 1); dx < n; ++dx) {
        if (dz == 0 && (dy < 0 || (dy == 0 && dx <= 0))) continue;
        out.push_back({dx, dy, dz});
      }
  return out;
}

// Scattering directions of the pairs with lattice difference d, expressed as
// grid-unit offsets of v' and v_*' from the first node of the pair.
struct Directions {
  bool swap = false;
  std::vector<Vec3> plus;
  std::vector<Vec3> minus;
};

Directions directions(const Lattice& d, double h, const KernelParams<double>& params, int m_phi) {
  const Vec3 dv(d[0], d[1], d[2]);
  const double len = dv.norm();
  Directions out;
  if (m_eps(params, h * len) == 2.0) {
    out.swap = true;
    return out;
  }
  const double theta = theta_eps(params, h * len);
  const auto fr = frame_of(dv);
  out.plus.reserve(m_phi);
  out.minus.reserve(m_phi);
  for (int m = 0; m < m_phi; ++m) {
    const Vec3 s = sigma_of(fr, theta, azimuth_node<double>(m, m_phi));
    out.plus.push_back(-0.5 * dv + 0.5 * len * s);
    out.minus.push_back(-0.5 * dv - 0.5 * len * s);
  }
  return out;
}

// Trilinear stencil for a fixed fractional offset. A corner whose weight is
// zero is pointed at its partner corner so no out-of-range node is read.
struct Stencil {
  std::array<int, 3> base{};
  std::array<bool, 3> frac{};
  std::array<std::ptrdiff_t, 8> offset{};
  std::array<double, 8> weight{};
};

Stencil make_stencil(const Vec3& delta, int n) {
  Stencil s;
  std::array<double, 3> t{};
  for (int a = 0; a < 3; ++a) {
    double x = delta[a];
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-12) x = r;
    const double fl = std::floor(x);
    s.base[a] = int(fl);
    t[a] = x - fl;
    s.frac[a] = t[a] > 0.0;
  }
  const std::ptrdiff_t nn = n;
  for (int c = 0; c < 8; ++c) {
    const int cx = c & 1, cy = (c >> 1) & 1, cz = (c >> 2) & 1;
    const double w = (cx ? t[0] : 1.0 - t[0]) * (cy ? t[1] : 1.0 - t[1]) * (cz ? t[2] : 1.0 - t[2]);
    const int ox = s.frac[0] ? cx : 0, oy = s.frac[1] ? cy : 0, oz = s.frac[2] ? cz : 0;
    s.offset[c] = (s.base[0] + ox) + nn * ((s.base[1] + oy) + nn * (s.base[2] + oz));
    s.weight[c] = w;
  }
  return s;
}

inline double apply(const Stencil& s, const double* p) {
  return s.weight[0] * p[s.offset[0]] + s.weight[1] * p[s.offset[1]] + s.weight[2] * p[s.offset[2]] +
         s.weight[3] * p[s.offset[3]] + s.weight[4] * p[s.offset[4]] + s.weight[5] * p[s.offset[5]] +
         s.weight[6] * p[s.offset[6]] + s.weight[7] * p[s.offset[7]];
}

struct Box {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
  bool empty() const { return lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2]; }
};

// Output nodes i with i - d on the grid.
Box pair_box(const Lattice& d, int n) {
  Box b;
  for (int a = 0; a < 3; ++a) {
    b.lo[a] = std::max(0, d[a]);
    b.hi[a] = std::min(n - 1, n - 1 + d[a]);
  }
  return b;
}

// Further restricts to nodes whose shifted point lies in the box.
void clip_box(Box& b, const Stencil& s, int n) {
  for (int a = 0; a < 3; ++a) {
    b.lo[a] = std::max(b.lo[a], -s.base[a]);
    b.hi[a] = std::min(b.hi[a], n - 1 - s.base[a] - (s.frac[a] ? 1 : 0));
  }
}

template <bool Symmetric>
void accumulate_gain(const double* F, const double* H, double* out, int n, const Lattice& d,
                     const Directions& dirs, double c_phi, double c_swap, std::vector<double>& row_a,
                     std::vector<double>& row_b) {
  const std::ptrdiff_t nn = n;
  const std::ptrdiff_t shift = d[0] + nn * (d[1] + nn * d[2]);
  const Box pairs = pair_box(d, n);
  if (pairs.empty()) return;

  if (dirs.swap) {
    // theta = pi: v' = v_j and v_*' = v_i exactly.
    for (int z = pairs.lo[2]; z <= pairs.hi[2]; ++z)
      for (int y = pairs.lo[1]; y <= pairs.hi[1]; ++y) {
        const std::ptrdiff_t row = nn * (y + nn * z);
        for (int x = pairs.lo[0]; x <= pairs.hi[0]; ++x) {
          const std::ptrdiff_t i = row + x, j = i - shift;
          out[i] += c_swap * F[j] * H[i];
          out[j] += c_swap * F[i] * H[j];
        }
      }
    return;
  }

  for (std::size_t m = 0; m < dirs.plus.size(); ++m) {
    const Stencil sp = make_stencil(dirs.plus[m], n);
    const Stencil sm = make_stencil(dirs.minus[m], n);
    Box b = pairs;
    clip_box(b, sp, n);
    clip_box(b, sm, n);
    if (b.empty()) continue;
    const int x0 = b.lo[0], len = b.hi[0] - b.lo[0] + 1;
    double* pi = row_a.data();
    double* pj = row_b.data();
    for (int z = b.lo[2]; z <= b.hi[2]; ++z)
      for (int y = b.lo[1]; y <= b.hi[1]; ++y) {
        const std::ptrdiff_t row = nn * (y + nn * z) + x0;
        const double* fr = F + row;
        const double* hr = H + row;
        if constexpr (Symmetric) {
          for (int x = 0; x < len; ++x) pi[x] = c_phi * apply(sp, fr + x) * apply(sm, fr + x);
        } else {
          // The partner node j = i - d sees the same two points with the
          // roles of v' and v_*' exchanged.
          for (int x = 0; x < len; ++x) {
            pi[x] = c_phi * apply(sp, fr + x) * apply(sm, hr + x);
            pj[x] = c_phi * apply(sm, fr + x) * apply(sp, hr + x);
          }
        }
        double* dst = out + row;
        for (int x = 0; x < len; ++x) dst[x] += pi[x];
        double* dst_j = dst - shift;
        const double* src_j = Symmetric ? pi : pj;
        for (int x = 0; x < len; ++x) dst_j[x] += src_j[x];
      }
  }
}

template <bool Symmetric>
Eigen::ArrayXd gain_values(const Distribution& f, const Distribution& h, const KernelParams<double>& params,
                           const QuadratureSpec& quad) {
  params.validate();
  quad.validate();
  if (!(f.grid() == h.grid())) throw std::invalid_argument("q_gain: arguments live on different grids");
  const GridSpec& g = f.grid();
  const int n = g.n;
  const double hh = g.h();
  const double c_swap = g.cell_volume() * total_rate(params);
  const double c_phi = c_swap / quad.m_phi;
  const auto ds = half_space(n);
  const Eigen::Index size = Eigen::Index(g.size());
  const double* F = f.values().data();
  const double* H = h.values().data();

  const int threads = thread_count();
  std::vector<Eigen::ArrayXd> partial(std::size_t(threads), Eigen::ArrayXd::Zero(size));

  auto work = [&](int tid, int nthreads) {
    std::vector<double> ra(n), rb(n);
    double* out = partial[std::size_t(tid)].data();
    // Static contiguous blocks: the split depends only on the thread count.
    const std::size_t total = ds.size();
    const std::size_t begin = total * std::size_t(tid) / std::size_t(nthreads);
    const std::size_t end = total * std::size_t(tid + 1) / std::size_t(nthreads);
    for (std::size_t q = begin; q < end; ++q) {
      const Directions dirs = directions(ds[q], hh, params, quad.m_phi);
      accumulate_gain<Symmetric>(F, H, out, n, ds[q], dirs, c_phi, c_swap, ra, rb);
    }
  };

#ifdef GEPS_HAVE_OPENMP
#pragma omp parallel num_threads(threads)
  work(omp_get_thread_num(), omp_get_num_threads());
#else
  work(0, 1);
#endif

  Eigen::ArrayXd out = c_swap * f.values() * h.values();  // d = 0: identity collision
  for (const auto& p : partial) out += p;
  return out.max(0.0);
}

}  // namespace

Distribution q_gain(const Distribution& f, const KernelParams<double>& params, const QuadratureSpec& quad) {
  return Distribution(f.grid(), gain_values<true>(f, f, params, quad));
}

Distribution q_gain(const Distribution& f, const Distribution& h, const KernelParams<double>& params,
                    const QuadratureSpec& quad) {
  return Distribution(f.grid(), gain_values<false>(f, h, params, quad));
}

Distribution q_loss(const Distribution& f, const KernelParams<double>& params) {
  params.validate();
  const double mass = f.grid().cell_volume() * f.values().sum();
  return Distribution(f.grid(), total_rate(params) * mass * f.values());
}

GridField q_total(const Distribution& f, const KernelParams<double>& params, const QuadratureSpec& quad) {
  const Distribution gain = q_gain(f, params, quad);
  const Distribution loss = q_loss(f, params);
  return {f.grid(), gain.values() - loss.values()};
}

WeakForm weak_form_q(const Distribution& f, const TestFunction& phi, const KernelParams<double>& params,
                     const QuadratureSpec& quad) {
  params.validate();
  quad.validate();
  const GridSpec& g = f.grid();
  const int n = g.n;
  const std::ptrdiff_t nn = n;
  const double hh = g.h();
  const double coef = g.cell_volume() * g.cell_volume() * total_rate(params) / quad.m_phi;
  const auto ds = half_space(n);
  const double* F = f.values().data();

  return phi.visit([&](const auto& fam) {
    std::vector<double> at_node(g.size());
    for (std::size_t idx = 0; idx < g.size(); ++idx) at_node[idx] = fam.value(g.node(idx));

    const int threads = thread_count();
    std::vector<WeakForm> partial(static_cast<std::size_t>(threads));

    auto work = [&](int tid, int nthreads) {
      double value = 0.0, magnitude = 0.0;
      std::vector<Vec3> vp, vm;
      const std::size_t total = ds.size();
      const std::size_t begin = total * std::size_t(tid) / std::size_t(nthreads);
      const std::size_t end = total * std::size_t(tid + 1) / std::size_t(nthreads);
      for (std::size_t q = begin; q < end; ++q) {
        const Lattice& d = ds[q];
        const Directions dirs = directions(d, hh, params, quad.m_phi);
        // theta = pi swaps the pair: the bracket vanishes identically.
        if (dirs.swap) continue;
        vp.clear();
        vm.clear();
        for (std::size_t m = 0; m < dirs.plus.size(); ++m) {
          vp.push_back(hh * dirs.plus[m]);
          vm.push_back(hh * dirs.minus[m]);
        }
        const Box b = pair_box(d, n);
        const std::ptrdiff_t shift = d[0] + nn * (d[1] + nn * d[2]);
        for (int z = b.lo[2]; z <= b.hi[2]; ++z)
          for (int y = b.lo[1]; y <= b.hi[1]; ++y)
            for (int x = b.lo[0]; x <= b.hi[0]; ++x) {
              const std::ptrdiff_t i = x + nn * (y + nn * z), j = i - shift;
              const double ff = F[i] * F[j];
              if (ff == 0.0) continue;
              const Vec3 vi = g.node(x, y, z);
              const double base = at_node[std::size_t(i)] + at_node[std::size_t(j)];
              const double base_abs = std::abs(at_node[std::size_t(i)]) + std::abs(at_node[std::size_t(j)]);
              double s = 0.0, s_abs = 0.0;
              for (std::size_t m = 0; m < vp.size(); ++m) {
                const double a = fam.value(vi + vp[m]);
                const double c = fam.value(vi + vm[m]);
                s += (a + c) - base;
                s_abs += std::abs(a) + std::abs(c) + base_abs;
              }
              value += ff * s;
              magnitude += ff * s_abs;
            }
      }
      partial[std::size_t(tid)] = {value, magnitude};
    };

#ifdef GEPS_HAVE_OPENMP
#pragma omp parallel num_threads(threads)
    work(omp_get_thread_num(), omp_get_num_threads());
#else
    work(0, 1);
#endif

    WeakForm out;
    for (const auto& p : partial) {
      out.value += p.value;
      out.magnitude += p.magnitude;
    }
    out.value *= coef;
    out.magnitude *= coef;
    return out;
  });
}

}  // namespace geps
