#include "filterstat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

using cplx = std::complex<double>;

constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980478606, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b;
  cplx value;
  double error;
  double absval;  // integral of |f|, for the roundoff floor
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const ComplexIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx rk = fc * wgk[10];
  cplx rg(0.0, 0.0);
  cplx fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = h * xgk[j];
    fv1[j] = f(c - dx);
    fv2[j] = f(c + dx);
    rk += wgk[j] * (fv1[j] + fv2[j]);
    if (j % 2 == 1) rg += wg[j / 2] * (fv1[j] + fv2[j]);
  }
  // QUADPACK-style error scaling
  double rabs = wgk[10] * std::abs(fc);
  for (int j = 0; j < 10; ++j) rabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
  const cplx mean = 0.5 * rk;
  double resasc = wgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  resasc *= std::abs(h);
  double err = std::abs((rk - rg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {a, b, rk * h, err, rabs * std::abs(h)};
}

}  // namespace

QuadResult integrate(const ComplexIntegrand& f, std::vector<double> points, const Quadrature& q) {
  if (points.size() < 2) throw InvalidArgument("integrate: need at least two points");
  const double lo = points.front(), hi = points.back();
  double sign = 1.0;
  if (hi < lo) {
    std::reverse(points.begin(), points.end());
    sign = -1.0;
  }
  const double a0 = points.front(), b0 = points.back();
  std::sort(points.begin(), points.end());
  points.erase(std::remove_if(points.begin(), points.end(),
                              [&](double x) { return !(x >= a0 && x <= b0); }),
               points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  QuadResult out;
  if (points.size() < 2) return out;

  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  cplx total(0.0, 0.0);
  double err = 0.0, absval = 0.0;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    Panel p = gk21(f, points[i], points[i + 1]);
    total += p.value;
    err += p.error;
    absval += p.absval;
    heap.push(p);
  }
  int n = static_cast<int>(heap.size());
  // cancellation limits what is attainable: never ask for less than roundoff in sum |f|
  auto target = [&] {
    return std::max({q.rel_tol * std::abs(total), q.abs_tol, 50.0 * 2.2204460492503131e-16 * absval});
  };
  // panels only a few ulp wide cannot place their nodes accurately; bisecting them
  // chases rounding noise, so their error is carried as irreducible instead
  double frozen = 0.0;
  while (err - frozen > target() && !heap.empty()) {
    if (n >= q.max_subdivisions) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "integrate: subdivision budget exhausted (error %.3e, value %.3e)", err,
                    std::abs(total));
      throw QuadratureFailure(buf);
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    const double ulp = std::nextafter(std::max(std::abs(p.a), std::abs(p.b)), INFINITY) -
                       std::max(std::abs(p.a), std::abs(p.b));
    if (p.b - p.a < 100.0 * ulp || !(m > p.a && m < p.b)) {
      frozen += p.error;
      done.push_back(p);
      continue;
    }
    Panel l = gk21(f, p.a, m), r = gk21(f, m, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    absval += l.absval + r.absval - p.absval;
    heap.push(l);
    heap.push(r);
    ++n;
    if (n % 64 == 0) {
      // resum to limit drift from incremental updates
      total = 0.0;
      err = 0.0;
      absval = 0.0;
      frozen = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        absval += copy.top().absval;
        copy.pop();
      }
      for (const auto& d : done) {
        total += d.value;
        err += d.error;
        absval += d.absval;
        frozen += d.error;
      }
    }
  }
  out.value = sign * total;
  out.error = err;
  out.subdivisions = n;
  return out;
}

QuadResult quad_semi_infinite(const ComplexIntegrand& f, double center, double width,
                              const Quadrature& q) {
  if (!(width > 0.0)) throw InvalidArgument("quad_semi_infinite: width must be positive");
  const double end = center + 12.0 * width;
  if (end <= 0.0) return {};
  std::vector<double> pts{0.0};
  for (int k = -11; k <= 11; k += 2) {
    const double x = center + k * width;
    if (x > 0.0 && x < end) pts.push_back(x);
  }
  pts.push_back(end);
  return integrate(f, pts, q);
}

}  // namespace filterstat
