#include "geps/landau_operator.hpp"

#include "geps/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace geps {

LandauWeakForm weak_form_ql(const Distribution& f, const TestFunction& phi, double gamma) {
  if (!(gamma >= -3.0 && gamma < 0.0))
    throw std::invalid_argument("weak_form_ql: gamma must lie in [-3, 0), got " + std::to_string(gamma));
  const GridSpec& g = f.grid();
  const int n = g.n;
  const std::ptrdiff_t nn = n;
  const double hh = g.h();
  const std::size_t size = g.size();

  std::vector<Vec3> grad(size);
  std::vector<Mat3> hess(size);
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (f[idx] == 0.0) continue;
    const Vec3 v = g.node(idx);
    grad[idx] = phi.gradient(v);
    hess[idx] = phi.hessian(v);
  }

  // Unordered pairs via lattice differences d in a half space; each counts twice.
  std::vector<std::array<int, 3>> ds;
  for (int dz = 0; dz < n; ++dz)
    for (int dy = -(n - 1); dy < n; ++dy)
      for (int dx = -(n - 1); dx < n; ++dx) {
        if (dz == 0 && (dy < 0 || (dy == 0 && dx <= 0))) continue;
        ds.push_back({dx, dy, dz});
      }

  const double* F = f.values().data();
  const int threads = thread_count();
  std::vector<LandauWeakForm> partial(static_cast<std::size_t>(threads));

  auto work = [&](int tid, int nthreads) {
    LandauWeakForm acc;
    const std::size_t begin = ds.size() * std::size_t(tid) / std::size_t(nthreads);
    const std::size_t end = ds.size() * std::size_t(tid + 1) / std::size_t(nthreads);
    for (std::size_t q = begin; q < end; ++q) {
      const auto& d = ds[q];
      const Vec3 u = hh * Vec3(d[0], d[1], d[2]);
      const double un = u.norm();
      const double w = std::pow(un, gamma);
      const Mat3 pi = projector(u);
      const bool near = un <= 2.0 * hh * (1.0 + 1e-12);
      const std::ptrdiff_t shift = d[0] + nn * (d[1] + nn * d[2]);
      double s = 0.0, s_abs = 0.0;
      for (int z = std::max(0, d[2]); z <= std::min(n - 1, n - 1 + d[2]); ++z)
        for (int y = std::max(0, d[1]); y <= std::min(n - 1, n - 1 + d[1]); ++y)
          for (int x = std::max(0, d[0]); x <= std::min(n - 1, n - 1 + d[0]); ++x) {
            const std::ptrdiff_t i = x + nn * (y + nn * z), j = i - shift;
            const double ff = F[i] * F[j];
            if (ff == 0.0) continue;
            const std::size_t a = std::size_t(i), b = std::size_t(j);
            const double first = -2.0 * (grad[a] - grad[b]).dot(u);
            const double second = 0.5 * un * un * ((hess[a] + hess[b]).cwiseProduct(pi)).sum();
            s += ff * (first + second);
            s_abs += ff * (std::abs(first) + std::abs(second));
          }
      acc.value += w * s;
      acc.magnitude += w * s_abs;
      if (near) acc.near_diagonal += w * s;
    }
    partial[std::size_t(tid)] = acc;
  };

#ifdef GEPS_HAVE_OPENMP
#pragma omp parallel num_threads(threads)
  work(omp_get_thread_num(), omp_get_num_threads());
#else
  work(0, 1);
#endif

  LandauWeakForm out;
  for (const auto& p : partial) {
    out.value += p.value;
    out.near_diagonal += p.near_diagonal;
    out.magnitude += p.magnitude;
  }
  const double c = 2.0 * g.cell_volume() * g.cell_volume();
  out.value *= c;
  out.near_diagonal *= c;
  out.magnitude *= c;
  return out;
}

std::vector<GrazingGapRecord> grazing_gap(const std::vector<Distribution>& fs, const std::string& f_id,
                                          const TestFunction& phi,
                                          const std::vector<KernelParams<double>>& params_list,
                                          const QuadratureSpec& quad) {
  if (params_list.empty()) throw std::invalid_argument("grazing_gap: empty kernel list");
  if (fs.size() != params_list.size()) throw std::invalid_argument("grazing_gap: one distribution per kernel");
  const double gamma = params_list.front().gamma;
  for (const auto& p : params_list) {
    p.validate();
    if (p.gamma != gamma) throw std::invalid_argument("grazing_gap: all kernels must share gamma");
  }
  std::vector<GrazingGapRecord> out;
  out.reserve(params_list.size());
  // The Landau side depends on f only; reuse it when f repeats.
  const Distribution* last_f = nullptr;
  LandauWeakForm landau;
  for (std::size_t k = 0; k < params_list.size(); ++k) {
    if (last_f != &fs[k]) {
      landau = weak_form_ql(fs[k], phi, gamma);
      last_f = &fs[k];
    }
    GrazingGapRecord r;
    r.gamma = gamma;
    r.eps = params_list[k].eps;
    r.weak_boltzmann = weak_form_q(fs[k], phi, params_list[k], quad).value;
    r.weak_landau = landau.value;
    r.gap = std::abs(r.weak_boltzmann - r.weak_landau);
    r.phi_id = phi.id();
    r.f_id = f_id;
    r.near_diagonal = landau.near_diagonal;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GrazingGapRecord> grazing_gap(const Distribution& f, const std::string& f_id, const TestFunction& phi,
                                          const std::vector<KernelParams<double>>& params_list,
                                          const QuadratureSpec& quad) {
  if (params_list.empty()) throw std::invalid_argument("grazing_gap: empty kernel list");
  const double gamma = params_list.front().gamma;
  for (const auto& p : params_list) {
    p.validate();
    if (p.gamma != gamma) throw std::invalid_argument("grazing_gap: all kernels must share gamma");
  }
  const LandauWeakForm landau = weak_form_ql(f, phi, gamma);
  std::vector<GrazingGapRecord> out;
  for (const auto& p : params_list) {
    GrazingGapRecord r;
    r.gamma = gamma;
    r.eps = p.eps;
    r.weak_boltzmann = weak_form_q(f, phi, p, quad).value;
    r.weak_landau = landau.value;
    r.gap = std::abs(r.weak_boltzmann - r.weak_landau);
    r.phi_id = phi.id();
    r.f_id = f_id;
    r.near_diagonal = landau.near_diagonal;
    out.push_back(std::move(r));
  }
  return out;
}

double loglog_slope(const std::vector<GrazingGapRecord>& records) {
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (r.gap > 0.0 && r.eps > 0.0) {
      xs.push_back(std::log(r.eps));
      ys.push_back(std::log(r.gap));
    }
  }
  if (xs.size() < 2) throw std::invalid_argument("loglog_slope: need at least two positive gaps");
  const double m = double(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: all eps values coincide");
  return sxy / sxx;
}

}  // namespace geps
