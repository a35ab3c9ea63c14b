#pragma once

#include <string>
#include <vector>

#include "orbitfield/algebra.hpp"

namespace orbitfield {

// Index sets use 1-based labels, matching the flag g_i = span{H_i,...,H_n}.
using IndexList = std::vector<int>;

struct PukanszkyData {
  IndexList index_set;  // ascending
  IndexList J;          // strictly descending
  IndexList K;          // aligned with J
};

struct VergnePolarization {
  std::vector<Vec> Y;
  std::vector<Vec> X;
  Subspace subspace;
};

struct VergneResult {
  VergnePolarization polarization;
  PukanszkyData indices;
  std::vector<std::string> warnings;
  double zero_threshold = 0.0;
};

struct StratumLabel {
  IndexList J;
  IndexList K;
  int rank = 0;
};

enum class Ordering { Less, Equal, Greater };

// |v| > zero_threshold  <=>  v counts as nonzero.
double vergne_zero_threshold(const LieAlgebra& a, const Vec& ell, double rel = 1e-9);

IndexList pukanszky_index_set(const LieAlgebra& a, const Vec& ell);
VergneResult vergne_polarization(const LieAlgebra& a, const Vec& ell, double rel_threshold = 1e-9);
Vec pukanszky_representative(const LieAlgebra& a, const Vec& ell);

Ordering compare_strata(const StratumLabel& a, const StratumLabel& b);
bool operator==(const StratumLabel& a, const StratumLabel& b);

struct Stratification {
  std::vector<StratumLabel> strata;           // sorted, rank = position
  std::vector<int> assignment;                // per input functional: index into strata
  std::vector<std::vector<int>> members;      // per stratum: input positions
};

Stratification stratify(const LieAlgebra& a, const std::vector<Vec>& sample);

StratumLabel label_of(const LieAlgebra& a, const Vec& ell);
std::string to_string(const StratumLabel& s);

}  // namespace orbitfield
