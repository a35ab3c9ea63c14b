#include "orbitfield/strata.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "orbitfield/errors.hpp"
#include "orbitfield/parallel.hpp"

namespace orbitfield {

double vergne_zero_threshold(const LieAlgebra& a, const Vec& ell, double rel) {
  return rel * (1.0 + ell.norm() * a.max_structure_norm());
}

IndexList pukanszky_index_set(const LieAlgebra& a, const Vec& ell) {
  const int n = a.dim();
  const Subspace g_ell = stabilizer(a, ell);
  const Mat& nb = g_ell.basis();
  // dims[i] = dim(g(l) cap g_{i+1}) for 0-based i; dims[n] = 0.
  std::vector<int> dims(n + 1, 0);
  for (int i = 0; i < n && nb.cols() > 0; ++i) {
    if (i == 0) {
      dims[0] = g_ell.dim();
      continue;
    }
    // nb is orthonormal, so an absolute cut is scale-free here.
    Eigen::JacobiSVD<Mat> svd(nb.topRows(i));
    int rank = 0;
    for (int r = 0; r < svd.singularValues().size(); ++r)
      if (svd.singularValues()(r) > 1e-8) ++rank;
    dims[i] = g_ell.dim() - rank;
  }
  IndexList out;
  for (int i = 0; i < n; ++i)
    if (dims[i] == dims[i + 1]) out.push_back(i + 1);
  return out;
}

VergneResult vergne_polarization(const LieAlgebra& a, const Vec& ell, double rel_threshold) {
  const int n = a.dim();
  VergneResult res;
  const double thr = vergne_zero_threshold(a, ell, rel_threshold);
  res.zero_threshold = thr;
  const Mat b = a.skew_form(ell);

  struct Item {
    int label;
    Vec v;
  };
  std::vector<Item> items;
  for (int i = 0; i < n; ++i) items.push_back({i + 1, Vec::Unit(n, i)});

  bool ambiguous = false;
  auto pair = [&](const Vec& u, const Vec& v) {
    const double x = u.dot(b * v);
    const double ax = std::abs(x);
    if (ax > 0.1 * thr && ax < 10.0 * thr) ambiguous = true;
    return x;
  };

  for (int step = 0; step <= n; ++step) {
    int j_pos = -1;
    for (int p = static_cast<int>(items.size()) - 1; p >= 0 && j_pos < 0; --p) {
      for (const auto& q : items) {
        if (std::abs(pair(items[p].v, q.v)) > thr) {
          j_pos = p;
          break;
        }
      }
    }
    if (j_pos < 0) break;
    const Vec y = items[j_pos].v;

    int k_pos = -1;
    for (int p = static_cast<int>(items.size()) - 1; p >= 0; --p) {
      if (std::abs(pair(items[p].v, y)) > thr) {
        k_pos = p;
        break;
      }
    }
    if (k_pos < 0) throw InternalError("vergne: no partner index for Y");
    const Vec x = items[k_pos].v;
    const double denom = pair(x, y);

    for (int p = 0; p < k_pos; ++p) {
      const double coef = pair(items[p].v, y) / denom;
      if (coef != 0.0) items[p].v -= coef * x;
    }
    res.indices.J.push_back(items[j_pos].label);
    res.indices.K.push_back(items[k_pos].label);
    res.polarization.Y.push_back(y);
    res.polarization.X.push_back(x);
    items.erase(items.begin() + k_pos);
  }

  Mat p(n, static_cast<int>(items.size()));
  for (std::size_t c = 0; c < items.size(); ++c) p.col(static_cast<int>(c)) = items[c].v;
  res.polarization.subspace = items.empty() ? Subspace::zero(n) : Subspace::span(p, 1e-12);

  const int stab_dim = stabilizer(a, ell).dim();
  const int d = static_cast<int>(res.indices.J.size());
  if (2 * d != n - stab_dim) {
    throw InternalError("vergne: iteration stopped at d=" + std::to_string(d) +
                        " but orbit dimension is " + std::to_string(n - stab_dim));
  }
  IndexList all = res.indices.J;
  all.insert(all.end(), res.indices.K.begin(), res.indices.K.end());
  std::sort(all.begin(), all.end());
  res.indices.index_set = all;
  if (ambiguous) {
    res.warnings.push_back("nonzero test within 10x of the zero threshold " + std::to_string(thr));
  }
  return res;
}

Vec pukanszky_representative(const LieAlgebra& a, const Vec& ell) {
  const Subspace orb = orbit_space(a, ell);
  const IndexList idx = pukanszky_index_set(a, ell);
  const int m = orb.dim();
  if (static_cast<int>(idx.size()) != m) {
    throw NumericalError("index set size does not match orbit dimension");
  }
  if (m == 0) return ell;
  Mat sys(m, m);
  Vec rhs(m);
  for (int r = 0; r < m; ++r) {
    sys.row(r) = orb.basis().row(idx[r] - 1);
    rhs(r) = -ell(idx[r] - 1);
  }
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(m - 1) < 1e-9 * std::max(1.0, s(0))) {
    throw NumericalError("representative system is singular");
  }
  Vec coef = svd.solve(rhs);
  Vec out = ell + orb.basis() * coef;
  double resid = 0.0;
  for (int i : idx) resid = std::max(resid, std::abs(out(i - 1)));
  if (resid > 1e-9 * std::max(1.0, ell.norm())) {
    throw NumericalError("representative residual too large");
  }
  for (int i : idx) out(i - 1) = 0.0;
  return out;
}

Ordering compare_strata(const StratumLabel& a, const StratumLabel& b) {
  if (a.J.size() != a.K.size() || b.J.size() != b.K.size()) {
    throw MalformedInput("stratum label with |J| != |K|");
  }
  if (a.J.size() != b.J.size()) return a.J.size() < b.J.size() ? Ordering::Less : Ordering::Greater;
  for (std::size_t m = 0; m < a.J.size(); ++m) {
    if (a.J[m] != b.J[m]) return a.J[m] < b.J[m] ? Ordering::Less : Ordering::Greater;
    if (a.K[m] != b.K[m]) return a.K[m] < b.K[m] ? Ordering::Less : Ordering::Greater;
  }
  return Ordering::Equal;
}

bool operator==(const StratumLabel& a, const StratumLabel& b) {
  return a.J == b.J && a.K == b.K;
}

StratumLabel label_of(const LieAlgebra& a, const Vec& ell) {
  auto v = vergne_polarization(a, ell);
  return {v.indices.J, v.indices.K, 0};
}

Stratification stratify(const LieAlgebra& a, const std::vector<Vec>& sample) {
  Stratification out;
  std::vector<StratumLabel> labels(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) { labels[i] = label_of(a, sample[i]); });

  std::vector<StratumLabel> distinct;
  for (const auto& l : labels) {
    bool seen = false;
    for (const auto& d : distinct) seen = seen || (d == l);
    if (!seen) distinct.push_back(l);
  }
  std::sort(distinct.begin(), distinct.end(), [](const StratumLabel& x, const StratumLabel& y) {
    return compare_strata(x, y) == Ordering::Less;
  });
  for (std::size_t r = 0; r < distinct.size(); ++r) distinct[r].rank = static_cast<int>(r);
  out.members.resize(distinct.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t r = 0; r < distinct.size(); ++r) {
      if (distinct[r] == labels[i]) {
        out.assignment.push_back(static_cast<int>(r));
        out.members[r].push_back(static_cast<int>(i));
        break;
      }
    }
  }
  out.strata = std::move(distinct);
  return out;
}

std::string to_string(const StratumLabel& s) {
  std::ostringstream os;
  auto put = [&](const IndexList& l) {
    os << "{";
    for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
    os << "}";
  };
  os << "(";
  put(s.J);
  os << ",";
  put(s.K);
  os << ")";
  return os.str();
}

}  // namespace orbitfield
