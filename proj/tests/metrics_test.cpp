#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "uwdepth/errors.hpp"
#include "uwdepth/metrics.hpp"

using namespace uwd;

namespace {

// Scalar-loop reference over jointly valid pixels, median scaling included.
MetricReport oracle_metrics(const DepthMap& pred, const DepthMap& gt) {
  std::vector<double> p, g;
  for (std::size_t i = 0; i < pred.data.size(); ++i)
    if (pred.validity[i] && gt.validity[i]) {
      p.push_back(pred.data[i]);
      g.push_back(gt.data[i]);
    }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  const double scale = median(g) / median(p);

  MetricReport r;
  r.pixel_count = p.size();
  double sq_log = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i] * scale, gi = g[i];
    r.abs_rel += std::abs(pi - gi) / gi;
    r.sq_rel += (pi - gi) * (pi - gi) / gi;
    r.rmse += (pi - gi) * (pi - gi);
    sq_log += std::pow(std::log(pi) - std::log(gi), 2);
    const double ratio = std::max(pi / gi, gi / pi);
    r.delta1 += ratio < 1.25;
    r.delta2 += ratio < 1.25 * 1.25;
    r.delta3 += ratio < 1.25 * 1.25 * 1.25;
  }
  const double n = static_cast<double>(p.size());
  r.abs_rel /= n;
  r.sq_rel /= n;
  r.rmse = std::sqrt(r.rmse / n);
  r.rmse_log = std::sqrt(sq_log / n);
  r.delta1 /= n;
  r.delta2 /= n;
  r.delta3 /= n;
  return r;
}

void check_close(const MetricReport& a, const MetricReport& b, double tol) {
  CHECK(a.abs_rel == doctest::Approx(b.abs_rel).epsilon(tol));
  CHECK(a.sq_rel == doctest::Approx(b.sq_rel).epsilon(tol));
  CHECK(a.rmse == doctest::Approx(b.rmse).epsilon(tol));
  CHECK(a.rmse_log == doctest::Approx(b.rmse_log).epsilon(tol));
  CHECK(a.delta1 == doctest::Approx(b.delta1).epsilon(tol));
  CHECK(a.delta2 == doctest::Approx(b.delta2).epsilon(tol));
  CHECK(a.delta3 == doctest::Approx(b.delta3).epsilon(tol));
  CHECK(a.pixel_count == b.pixel_count);
}

DepthMap scaled(const DepthMap& d, double lambda) {
  DepthMap out = d;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    if (out.validity[i]) out.data[i] *= lambda;
  return out;
}

}  // namespace

TEST_CASE("median scaling") {
  const DepthMap gt = test::random_depth(6, 6, 1);

  SUBCASE("identical maps scale by one") {
    const auto [out, s] = median_scale(gt, gt);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < out.data.size(); ++i)
      CHECK(out.data[i] == doctest::Approx(gt.data[i]).epsilon(1e-12));
  }
  SUBCASE("doubled prediction scales by one half") {
    const auto [out, s] = median_scale(scaled(gt, 2.0), gt);
    CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("output median equals the ground-truth median") {
    const DepthMap pred = test::random_depth(6, 6, 2, 0.5, 4.0);
    const auto [out, s] = median_scale(pred, gt);
    std::vector<double> p(out.data.begin(), out.data.end());
    std::vector<double> g(gt.data.begin(), gt.data.end());
    std::sort(p.begin(), p.end());
    std::sort(g.begin(), g.end());
    auto med = [](const std::vector<double>& v) {
      return v.size() % 2 ? v[v.size() / 2]
                          : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    };
    CHECK(med(p) == doctest::Approx(med(g)).epsilon(1e-9));
  }
  SUBCASE("no jointly valid pixels is an input error") {
    DepthMap a(1, 2), b(1, 2);
    a.set(0, 0, 1.0);
    a.set_invalid(0, 1);
    b.set_invalid(0, 0);
    b.set(0, 1, 1.0);
    CHECK_THROWS_AS(median_scale(a, b), InputError);
  }
}

TEST_CASE("perfect predictions give the all-perfect report") {
  const DepthMap gt = test::random_depth(8, 8, 3);
  const MetricReport r = depth_metrics(gt, gt);
  CHECK(r.abs_rel == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.sq_rel == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.rmse == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.rmse_log == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.delta1 == 1.0);
  CHECK(r.delta2 == 1.0);
  CHECK(r.delta3 == 1.0);
  CHECK(r.pixel_count == 64);
  CHECK_FALSE(r.bg_error.has_value());
}

TEST_CASE("uniformly scaled predictions are perfect after median scaling") {
  const DepthMap gt = test::random_depth(8, 8, 4);
  const MetricReport r = depth_metrics(scaled(gt, 1.3), gt);
  CHECK(r.abs_rel == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.rmse == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.delta1 == 1.0);
}

TEST_CASE("metrics match the scalar-loop oracle on random instances") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    DepthMap pred = test::random_depth(8, 8, 1000 + trial, 0.5, 9.0);
    DepthMap gt = test::random_depth(8, 8, 2000 + trial, 0.5, 9.0);
    // Punch some invalid pixels into both.
    std::uniform_int_distribution<int> coord(0, 7);
    for (int k = 0; k < 6; ++k) {
      pred.set_invalid(coord(rng), coord(rng));
      gt.set_invalid(coord(rng), coord(rng));
    }
    const MetricReport got = depth_metrics(pred, gt);
    const MetricReport want = oracle_metrics(pred, gt);
    check_close(got, want, 1e-9);
    CHECK(got.delta1 <= got.delta2);
    CHECK(got.delta2 <= got.delta3);
  }
}

TEST_CASE("pipeline is invariant to prediction scale") {
  const DepthMap gt = test::random_depth(8, 8, 7);
  const DepthMap pred = test::random_depth(8, 8, 8, 0.4, 6.0);
  const MetricReport base = depth_metrics(pred, gt);
  for (double lambda : {0.1, 1.0, 10.0})
    check_close(depth_metrics(scaled(pred, lambda), gt), base, 1e-9);
}

TEST_CASE("depth cap drops far ground truth from the evaluation") {
  DepthMap gt(1, 4), pred(1, 4);
  const double g[4] = {2.0, 4.0, 30.0, 3.0};
  const double p[4] = {2.0, 4.0, 1.0, 3.0};
  for (int x = 0; x < 4; ++x) {
    gt.set(0, x, g[x]);
    pred.set(0, x, p[x]);
  }
  const MetricReport capped = depth_metrics(pred, gt, 10.0);
  CHECK(capped.pixel_count == 3);
  CHECK(capped.abs_rel == doctest::Approx(0.0).epsilon(1e-12));
  const MetricReport full = depth_metrics(pred, gt);
  CHECK(full.pixel_count == 4);
  CHECK(full.abs_rel > 0.0);
}

TEST_CASE("background error") {
  auto const_disp = [](int h, int w, double v) {
    DepthMap d(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) d.set(y, x, v);
    return d;
  };
  const PixelMask all(2, 2, true);

  SUBCASE("zero disparity background scores zero") {
    DepthMap z(2, 2);
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) z.set_invalid(y, x);  // disparity 0
    DepthMap disp = disparity_from_depth(z);
    CHECK(bg_error({disp}, {all}) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("constant background disparity is returned as-is") {
    CHECK(bg_error({const_disp(2, 2, 0.5)}, {all}) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("two images average their background means") {
    CHECK(bg_error({const_disp(2, 2, 0.2), const_disp(2, 2, 0.6)},
                   {all, all}) == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("linear under a uniform background shift") {
    DepthMap a(2, 2);
    a.set(0, 0, 0.1);
    a.set(0, 1, 0.3);
    a.set(1, 0, 0.2);
    a.set(1, 1, 0.4);
    const double base = bg_error({a}, {all});
    DepthMap b = a;
    for (double& v : b.data) v += 0.25;
    CHECK(bg_error({b}, {all}) == doctest::Approx(base + 0.25).epsilon(1e-12));
  }
  SUBCASE("partial masks use only masked pixels") {
    DepthMap a(1, 2);
    a.set(0, 0, 0.8);
    a.set(0, 1, 0.2);
    PixelMask m(1, 2, false);
    m.set(0, 1, true);
    CHECK(bg_error({a}, {m}) == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(bg_error({}, {}), InputError);
    CHECK_THROWS_AS(bg_error({const_disp(2, 2, 0.1)}, {all, all}), InputError);
    CHECK_THROWS_AS(bg_error({const_disp(2, 2, 0.1)}, {PixelMask(2, 2, false)}),
                    InputError);
    CHECK_THROWS_AS(bg_error({const_disp(2, 2, 0.1)}, {PixelMask(3, 2, true)}),
                    InputError);
  }
}

TEST_CASE("disparity conversion preserves invalidity as zero") {
  DepthMap d(1, 2);
  d.set(0, 0, 4.0);
  d.set_invalid(0, 1);
  const DepthMap s = disparity_from_depth(d);
  CHECK(s.at(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_FALSE(s.valid(0, 1));
  CHECK(s.at(0, 1) == 0.0);
}
