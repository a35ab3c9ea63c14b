#include <gtest/gtest.h>

#include <random>
#include <set>

#include "orbitfield/experiment.hpp"
#include "orbitfield/presets.hpp"
#include "orbitfield/strata.hpp"

using namespace orbitfield;

namespace {

Vec e(int n, int i) { return Vec::Unit(n, i); }

Subspace span_of(std::initializer_list<Vec> vs) {
  Mat m(vs.begin()->size(), static_cast<int>(vs.size()));
  int c = 0;
  for (const Vec& v : vs) m.col(c++) = v;
  return Subspace::span(m);
}

StratumLabel lbl(IndexList J, IndexList K) { return {std::move(J), std::move(K), 0}; }

}  // namespace

TEST(Pukanszky, Heisenberg) {
  EXPECT_EQ(pukanszky_index_set(load_preset("heis3"), e(3, 2)), (IndexList{1, 2}));
}

TEST(Pukanszky, ZeroFunctional) {
  for (const auto& name : preset_names()) {
    const LieAlgebra a = load_preset(name);
    EXPECT_TRUE(pukanszky_index_set(a, Vec::Zero(a.dim())).empty()) << name;
  }
}

TEST(Pukanszky, FreeThreeE12) {
  EXPECT_EQ(pukanszky_index_set(load_preset("free32"), e(6, 3)), (IndexList{1, 2}));
}

TEST(Vergne, Heisenberg) {
  const VergneResult v = vergne_polarization(load_preset("heis3"), e(3, 2));
  EXPECT_EQ(v.indices.J, (IndexList{2}));
  EXPECT_EQ(v.indices.K, (IndexList{1}));
  EXPECT_TRUE(same_subspace(v.polarization.subspace, span_of({e(3, 1), e(3, 2)})));
}

TEST(Vergne, FreeThreeE12) {
  const VergneResult v = vergne_polarization(load_preset("free32"), e(6, 3));
  EXPECT_EQ(v.indices.J, (IndexList{2}));
  EXPECT_EQ(v.indices.K, (IndexList{1}));
  EXPECT_EQ(v.polarization.subspace.dim(), 5);
  EXPECT_TRUE(same_subspace(v.polarization.subspace,
                            span_of({e(6, 1), e(6, 2), e(6, 3), e(6, 4), e(6, 5)})));
}

TEST(Vergne, ZeroFunctional) {
  const LieAlgebra a = load_preset("free42");
  const VergneResult v = vergne_polarization(a, Vec::Zero(a.dim()));
  EXPECT_TRUE(v.indices.J.empty());
  EXPECT_EQ(v.polarization.subspace.dim(), a.dim());
}

TEST(Vergne, RandomFunctionalsAreConsistent) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (const auto& name : preset_names()) {
    const LieAlgebra a = load_preset(name);
    const int n = a.dim();
    for (int t = 0; t < 40; ++t) {
      Vec ell(n);
      for (int i = 0; i < n; ++i) ell(i) = g(rng);
      const VergneResult v = vergne_polarization(a, ell);
      const int stab = stabilizer(a, ell).dim();
      std::set<int> jk(v.indices.J.begin(), v.indices.J.end());
      jk.insert(v.indices.K.begin(), v.indices.K.end());
      EXPECT_EQ(std::vector<int>(jk.begin(), jk.end()), v.indices.index_set) << name;
      EXPECT_EQ(static_cast<int>(v.indices.index_set.size()), n - stab) << name;
      EXPECT_EQ(2 * v.polarization.subspace.dim(), n + stab) << name;
      const Mat& P = v.polarization.subspace.basis();
      EXPECT_LT((P.transpose() * a.skew_form(ell) * P).cwiseAbs().maxCoeff(), 1e-9) << name;
    }
  }
}

TEST(Representative, SolvesConstraints) {
  const Vec r = pukanszky_representative(load_preset("heis3"), e(3, 0) + e(3, 2));
  EXPECT_LT((r - e(3, 2)).norm(), 1e-12);
}

TEST(Representative, FixedPoint) {
  const Vec r = pukanszky_representative(load_preset("heis3"), 3.0 * e(3, 2));
  EXPECT_LT((r - 3.0 * e(3, 2)).norm(), 1e-12);
}

TEST(Representative, OrbitInvariant) {
  const LieAlgebra a = load_preset("heis3");
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    const Vec x = Vec((Vec(3) << g(rng), g(rng), g(rng)).finished());
    const Vec r = pukanszky_representative(a, coadjoint(a, x, e(3, 2)));
    EXPECT_LT((r - e(3, 2)).norm(), 1e-10);
  }
}

TEST(Ordering, Examples) {
  EXPECT_EQ(compare_strata(lbl({}, {}), lbl({2}, {1})), Ordering::Less);
  EXPECT_EQ(compare_strata(lbl({2}, {1}), lbl({3}, {1})), Ordering::Less);
  EXPECT_EQ(compare_strata(lbl({3}, {1}), lbl({3}, {2})), Ordering::Less);
  EXPECT_EQ(compare_strata(lbl({3}, {2}), lbl({3}, {1})), Ordering::Greater);
  EXPECT_EQ(compare_strata(lbl({3}, {2}), lbl({3}, {2})), Ordering::Equal);
}

TEST(Stratify, HeisenbergSample) {
  const LieAlgebra a = load_preset("heis3");
  const Stratification s = stratify(a, {Vec::Zero(3), e(3, 0), e(3, 2), 2.0 * e(3, 2)});
  ASSERT_EQ(s.strata.size(), 2u);
  EXPECT_TRUE(s.strata[0].J.empty());
  EXPECT_EQ(s.strata[1].J, (IndexList{2}));
  EXPECT_EQ(s.strata[1].K, (IndexList{1}));
  EXPECT_EQ(s.members[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(s.members[1], (std::vector<int>{2, 3}));
  EXPECT_EQ(s.assignment, (std::vector<int>{0, 0, 1, 1}));
}

TEST(Stratify, EmptySample) {
  const Stratification s = stratify(load_preset("heis3"), {});
  EXPECT_TRUE(s.strata.empty());
  EXPECT_TRUE(s.assignment.empty());
}

TEST(Stratify, FreeFourOrbitDimensions) {
  const LieAlgebra a = load_preset("free42");
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  std::vector<Vec> sample;
  for (int t = 0; t < 100; ++t) {
    Vec v(10);
    for (int i = 0; i < 10; ++i) v(i) = g(rng);
    sample.push_back(v);
  }
  for (const Vec& v : sample_functionals(a, 20, 14)) sample.push_back(v);
  const Stratification s = stratify(a, sample);
  std::set<int> d;
  for (const auto& st : s.strata) d.insert(static_cast<int>(st.J.size()));
  EXPECT_EQ(d, (std::set<int>{0, 1, 2}));
}
