#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "boxls/matching.hpp"

using namespace boxls;

namespace {

double brute_min_assignment(const CostMatrix& cost) {
  std::vector<char> used(cost.rows, 0);
  std::function<double(int)> rec = [&](int col) -> double {
    if (col == cost.cols) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cost.rows; ++r) {
      if (used[r]) continue;
      used[r] = 1;
      best = std::min(best, cost.at(r, col) + rec(col + 1));
      used[r] = 0;
    }
    return best;
  };
  return rec(0);
}

}  // namespace

TEST_CASE("instance_cost examples") {
  const BBox box{2, 2, 6, 6};
  SoftMask ind(8, 8, 0.0);
  for (int y = box.y0; y < box.y1; ++y)
    for (int x = box.x0; x < box.x1; ++x) ind.at(y, x) = 1.0;
  CHECK(instance_cost(ind, box) == 0.0);

  SoftMask off(8, 8, 1e-9);
  CHECK(instance_cost(off, box) > 1.99);

  SoftMask half(4, 4, 0.0);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 2; ++x) half.at(y, x) = 1.0;
  CHECK(instance_cost(half, BBox{0, 0, 4, 4}) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("category_cost examples and errors") {
  const std::vector<double> certain{0.0, 1.0, 0.0};
  CHECK(category_cost(certain, 1) == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
  CHECK(category_cost(uniform, 2) == doctest::Approx(std::log(4.0)).epsilon(1e-9));

  const std::vector<double> mixed{0.25, 0.30, 0.45};
  CHECK(category_cost(mixed, 0) == doctest::Approx(1.3862943611).epsilon(1e-9));

  CHECK_THROWS_AS(category_cost(uniform, 7), Error);
  CHECK_THROWS_AS((category_cost(std::vector<double>{0.5, 0.2}, 0)), Error);

  // the clamp keeps an exact zero probability finite
  const std::vector<double> zero{1.0, 0.0};
  CHECK(category_cost(zero, 1) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("total_cost composition") {
  CostMatrix inst(2, 2);
  inst.values = {0.1, 0.4, 0.3, 0.2};
  CostMatrix cate(2, 2);
  cate.values = {1.0, 2.0, 3.0, 4.0};

  const CostMatrix only_inst = total_cost(inst, cate, 1.0, 0.0);
  CHECK(only_inst.values == inst.values);

  const CostMatrix only_cate = total_cost(inst, cate, 0.0, 1.0);
  CHECK(only_cate.values == cate.values);

  const CostMatrix both = total_cost(inst, cate, 2.0, 6.0);
  for (size_t i = 0; i < both.values.size(); ++i)
    CHECK(both.values[i] == doctest::Approx(2.0 * inst.values[i] + 6.0 * cate.values[i]));

  CostMatrix bad(1, 2);
  CHECK_THROWS_AS(total_cost(inst, bad, 1.0, 1.0), Error);

  // class-agnostic mode tolerates an empty category matrix
  const CostMatrix agnostic = total_cost(inst, CostMatrix{}, 2.0, 0.0);
  CHECK(agnostic.values[0] == doctest::Approx(0.2));
}

TEST_CASE("hungarian basics") {
  CostMatrix diag(3, 3, 1.0);
  diag.at(0, 0) = diag.at(1, 1) = diag.at(2, 2) = 0.0;
  const Assignment a = hungarian(diag);
  CHECK(a.gt_to_candidate == std::vector<int>{0, 1, 2});
  CHECK(a.total_cost == 0.0);

  CostMatrix single(1, 1);
  single.at(0, 0) = 123.0;
  const Assignment s = hungarian(single);
  CHECK(s.gt_to_candidate == std::vector<int>{0});
  CHECK(s.total_cost == 123.0);

  const Assignment none = hungarian(CostMatrix(4, 0));
  CHECK(none.gt_to_candidate.empty());
  CHECK(none.candidate_to_gt == std::vector<int>{-1, -1, -1, -1});
}

TEST_CASE("hungarian equals brute force and keeps every gt matched") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int cols = 1 + static_cast<int>(rng() % 5);
    const int rows = cols + static_cast<int>(rng() % 3);
    CostMatrix cost(rows, cols);
    for (double& v : cost.values) v = u(rng);
    const Assignment a = hungarian(cost);
    CHECK(a.total_cost == doctest::Approx(brute_min_assignment(cost)).epsilon(1e-12));

    std::vector<char> seen(rows, 0);
    for (int j = 0; j < cols; ++j) {
      REQUIRE(a.gt_to_candidate[j] >= 0);  // candidates >= gts: all matched
      CHECK(!seen[a.gt_to_candidate[j]]);
      seen[a.gt_to_candidate[j]] = 1;
      CHECK(a.candidate_to_gt[a.gt_to_candidate[j]] == j);
    }
  }
}

TEST_CASE("hungarian with fewer candidates than ground truths") {
  CostMatrix cost(2, 3);
  cost.values = {5.0, 1.0, 9.0,
                 2.0, 8.0, 3.0};
  const Assignment a = hungarian(cost);
  int matched = 0;
  for (int j = 0; j < 3; ++j)
    if (a.gt_to_candidate[j] >= 0) ++matched;
  CHECK(matched == 2);
  CHECK(a.total_cost == doctest::Approx(1.0 + 2.0));  // row0->gt1, row1->gt0
  CHECK(a.gt_to_candidate == std::vector<int>{1, 0, -1});
}

TEST_CASE("hungarian resolves ties lexicographically") {
  CostMatrix flat(3, 3, 0.5);
  CHECK(hungarian(flat).gt_to_candidate == std::vector<int>{0, 1, 2});

  // two optimal solutions; the smaller candidate for gt 0 must win
  CostMatrix tie(2, 2);
  tie.values = {1.0, 2.0,
                1.0, 2.0};
  CHECK(hungarian(tie).gt_to_candidate == std::vector<int>{0, 1});
}

TEST_CASE("hungarian invariances under shift and positive scaling") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    CostMatrix cost(n, n);
    for (double& v : cost.values) v = u(rng);
    const auto base = hungarian(cost).gt_to_candidate;

    CostMatrix shifted = cost;
    for (double& v : shifted.values) v += 17.25;
    CHECK(hungarian(shifted).gt_to_candidate == base);

    CostMatrix scaled = cost;
    for (double& v : scaled.values) v *= 0.037;
    CHECK(hungarian(scaled).gt_to_candidate == base);
  }
}

TEST_CASE("center_region_assign geometry") {
  // full scale: every in-box cell is positive
  const BBox box{2, 3, 7, 9};
  const auto full = center_region_assign(std::vector<BBox>{box}, 12, 12, 1.0);
  long long positives = 0;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      const bool inside = box.contains(j, i);
      CHECK((full.owner[i * 12 + j] == 0) == inside);
      if (inside) ++positives;
    }
  CHECK(positives == box.area());

  // a box inside one cell keeps exactly that cell
  const BBox dot{4, 4, 5, 5};
  const auto tiny = center_region_assign(std::vector<BBox>{dot}, 10, 10, 0.5);
  CHECK(tiny.positives[0] == std::vector<int>{4 * 10 + 4});

  // 6x6 box at half scale covers a 3x3 cell block
  const BBox six{2, 2, 8, 8};
  const auto half = center_region_assign(std::vector<BBox>{six}, 10, 10, 0.5);
  CHECK(half.positives[0].size() == 9);
  for (int i = 3; i <= 5; ++i)
    for (int j = 3; j <= 5; ++j) CHECK(half.owner[i * 10 + j] == 0);
}

TEST_CASE("center_region_assign dedup and scale monotonicity") {
  // the smaller box claims the contested cells
  const BBox big{0, 0, 10, 10};
  const BBox small{3, 3, 7, 7};
  const auto assigned =
      center_region_assign(std::vector<BBox>{big, small}, 10, 10, 1.0);
  CHECK(assigned.owner[5 * 10 + 5] == 1);
  CHECK(assigned.owner[0] == 0);

  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int x0 = static_cast<int>(rng() % 5), y0 = static_cast<int>(rng() % 5);
    const BBox b{x0, y0, x0 + 2 + static_cast<int>(rng() % 5),
                 y0 + 2 + static_cast<int>(rng() % 5)};
    std::vector<int> prev;
    for (double scale : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      const auto cur = center_region_assign(std::vector<BBox>{b}, 12, 12, scale);
      std::vector<int> locs = cur.positives[0];
      CHECK(std::includes(locs.begin(), locs.end(), prev.begin(), prev.end()));
      prev = std::move(locs);
    }
  }
}

TEST_CASE("matching weight defaults") {
  CHECK(kDefaultBeta1 == 2.0);
  CHECK(kDefaultBeta2 == 6.0);
  CHECK(kDefaultCenterScale == 0.2);
}
