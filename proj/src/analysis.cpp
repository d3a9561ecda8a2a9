#include "dipolecav/analysis.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "dipolecav/freespace.hpp"

namespace dipolecav {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

CouplingResult single(const Tensor3d& total) {
  CouplingResult r;
  r.rd = total;
  r.total = total;
  r.converged = true;
  return r;
}

double permittivity_of(const Geometry& g) {
  return std::visit([](const auto& v) { return v.permittivity; }, g);
}

}  // namespace

std::string geometry_name(const Geometry& g) {
  return std::visit(overloaded{[](const Free3D&) { return std::string("free3d"); },
                               [](const Free2D&) { return std::string("free2d"); },
                               [](const Free1D&) { return std::string("free1d"); },
                               [](const PlanarGeometry&) { return std::string("planar"); },
                               [](const ChannelGeometry&) { return std::string("channel"); }},
                    g);
}

Tensor3d free_reference(double p, const Placement& w, double X, double permittivity) {
  return coupling_free3d(p, Vector3d(X, w.y_A - w.y_D, w.z_A - w.z_D), permittivity).total;
}

CouplingResult evaluate(const Geometry& g, double p, const Placement& w, double X, const SumControl& ctrl) {
  const Vector3d r_A(X, w.y_A, w.z_A), r_D(0, w.y_D, w.z_D);
  return std::visit(
      overloaded{
          [&](const Free3D& f) {
            const auto c = coupling_free3d(p, Vector3d(r_A - r_D), f.permittivity);
            CouplingResult r;
            r.rd = c.v_plus;
            r.nrd = c.v_minus;
            r.total = c.total;
            r.converged = true;
            return r;
          },
          [&](const Free2D& f) {
            Tensor3d t = Tensor3d::Zero();
            t(2, 2) = coupling_free2d(p, X, f.width, f.permittivity);
            return single(t);
          },
          [&](const Free1D& f) {
            Tensor3d t = Tensor3d::Zero();
            t(1, 1) = t(2, 2) = coupling_free1d(p, X, f.a, f.b, f.permittivity);
            return single(t);
          },
          [&](const PlanarGeometry& pg) { return coupling_planar(p, pg, r_A, r_D, ctrl); },
          [&](const ChannelGeometry& cg) { return coupling_channel(p, cg, r_A, r_D, ctrl); }},
      g);
}

std::vector<double> log_grid(double x_min, double x_max, std::size_t count) {
  if (!(x_min > 0) || !(x_max > x_min) || count < 2)
    throw DomainError("grid needs 0 < x_min < x_max and at least 2 points");
  std::vector<double> x(count);
  const double a = std::log(x_min), b = std::log(x_max);
  for (std::size_t i = 0; i < count; ++i) x[i] = std::exp(a + (b - a) * static_cast<double>(i) / (count - 1));
  x.front() = x_min;
  x.back() = x_max;
  return x;
}

ExponentSeries local_exponent(const std::vector<double>& x, const std::vector<double>& mag, int window,
                              Component component) {
  if (x.size() != mag.size()) throw DomainError("local_exponent: x and magnitude lengths differ");
  if (window < 3 || window % 2 == 0) throw DomainError("local_exponent: window must be odd and >= 3");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw DomainError("local_exponent: x must be strictly increasing");
  const std::size_t N = x.size();
  ExponentSeries out{x, std::vector<double>(N, std::numeric_limits<double>::quiet_NaN()), component};
  if (N < 2) return out;
  const std::size_t w = std::min<std::size_t>(window, N);
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t lo = k >= w / 2 ? k - w / 2 : 0;
    if (lo + w > N) lo = N - w;
    double su = 0, sv = 0;
    bool valid = true;
    for (std::size_t i = lo; i < lo + w; ++i) {
      if (!(mag[i] > 0) || !std::isfinite(mag[i]) || !(x[i] > 0)) {
        valid = false;
        break;
      }
      su += std::log(x[i]);
      sv += std::log(mag[i]);
    }
    if (!valid) continue;
    su /= w;
    sv /= w;
    double num = 0, den = 0;
    for (std::size_t i = lo; i < lo + w; ++i) {
      const double du = std::log(x[i]) - su;
      num += du * (std::log(mag[i]) - sv);
      den += du * du;
    }
    out.n[k] = -num / den;
  }
  return out;
}

bool SweepResult::all_ok() const {
  for (const auto& s : status)
    if (s != "ok") return false;
  return true;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DIPOLECAV_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.components.empty()) throw DomainError("sweep needs at least one component");
  SweepResult res;
  res.x = log_grid(spec.x_min, spec.x_max, spec.count);
  res.components = spec.components;
  const std::size_t N = res.x.size();
  res.values.assign(N, CouplingResult{});
  res.status.assign(N, "ok");

  auto work = [&](std::size_t i) {
    try {
      res.values[i] = evaluate(spec.geometry, spec.p, spec.placement, res.x[i], spec.ctrl);
    } catch (const NotConverged& e) {
      res.values[i] = e.partial();
      res.status[i] = "not_converged";
    } catch (const Resonant&) {
      res.status[i] = "resonant";
    } catch (const ZeroSeparation&) {
      res.status[i] = "zero_separation";
    } catch (const DomainError&) {
      res.status[i] = "domain_error";
    } catch (const std::exception&) {
      res.status[i] = "error";
    }
  };

  const unsigned threads = std::min<std::size_t>(resolve_threads(spec.threads), N);
  if (threads <= 1) {
    for (std::size_t i = 0; i < N; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < N; i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const Component c : spec.components) {
    std::vector<double> mag(N, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < N; ++i)
      if (res.status[i] == "ok") mag[i] = std::abs(res.values[i].total(c.row, c.col));
    res.exponents.push_back(local_exponent(res.x, mag, spec.window, c));
  }
  return res;
}

RatioSeries enhancement_ratio(const Geometry& g, double p, const Placement& where, const std::vector<double>& x_grid,
                              Component c, const SumControl& ctrl) {
  RatioSeries out;
  const double eps = permittivity_of(g);
  for (double X : x_grid) {
    out.x.push_back(X);
    try {
      const auto cav = evaluate(g, p, where, X, ctrl).total(c.row, c.col);
      const auto ref = free_reference(p, where, X, eps)(c.row, c.col);
      out.ratio.push_back(std::abs(cav) / std::abs(ref));
      out.status.push_back("ok");
    } catch (const Resonant&) {
      out.ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      out.status.push_back("resonant");
    } catch (const NotConverged&) {
      out.ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      out.status.push_back("not_converged");
    } catch (const std::exception&) {
      out.ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      out.status.push_back("error");
    }
  }
  return out;
}

}  // namespace dipolecav
