#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "molbench/fingerprints.hpp"
#include "support/corpus.hpp"
#include "support/fingerprint_oracles.hpp"
#include "support/random_smiles.hpp"

using namespace molbench;
using molgraph::parse_smiles;
using testdata::pair_oracle;
using testdata::torsion_oracle;

namespace {

fp::FingerprintConfig config(fp::Kind kind, bool counted = true, int radius = 2, int length = 2048) {
  fp::FingerprintConfig c;
  c.kind = kind;
  c.counted = counted;
  c.radius = radius;
  c.length = length;
  return c;
}

int nonzero(const fp::FingerprintVector& v) {
  return static_cast<int>(std::count_if(v.values.begin(), v.values.end(), [](auto x) { return x != 0; }));
}

std::vector<std::uint32_t> sorted_nonzero_counts(const fp::FingerprintVector& v) {
  std::vector<std::uint32_t> out;
  for (auto x : v.values) {
    if (x) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(InitialInvariants, Examples) {
  auto cc = fp::initial_invariants(parse_smiles("CC"));
  EXPECT_EQ(cc[0], cc[1]);
  auto cco = fp::initial_invariants(parse_smiles("CCO"));
  EXPECT_NE(cco[0], cco[1]);
  EXPECT_NE(fp::initial_invariants(parse_smiles("C"))[0], fp::initial_invariants(parse_smiles("N"))[0]);
  // Ring membership and charge both enter the tuple.
  EXPECT_NE(fp::initial_invariants(parse_smiles("C1CC1"))[0], fp::initial_invariants(parse_smiles("CC(C)C"))[0]);
  EXPECT_NE(fp::initial_invariants(parse_smiles("[NH4+]"))[0], fp::initial_invariants(parse_smiles("[NH4]"))[0]);
}

TEST(Fold, Examples) {
  std::vector<std::uint64_t> a{5};
  auto v = fp::fold(a, 2048, true);
  EXPECT_EQ(v.values[5], 1u);
  EXPECT_EQ(v.total(), 1u);
  std::vector<std::uint64_t> b{(std::uint64_t{1} << 32) + 5};
  EXPECT_EQ(fp::fold(b, 2048, true).values[5], 1u);
  std::vector<std::uint64_t> c{7, 7, 7};
  EXPECT_EQ(fp::fold(c, 2048, false).values[7], 1u);
  EXPECT_EQ(fp::fold(c, 2048, true).values[7], 3u);
  EXPECT_THROW(fp::fold(c, 1, true), std::invalid_argument);
}

TEST(Ecfp, SingleAtomRadiusZero) {
  auto v = fp::ecfp(parse_smiles("C"), config(fp::Kind::ecfp, true, 0));
  EXPECT_EQ(nonzero(v), 1);
  EXPECT_EQ(v.total(), 1u);
  // Isolated atoms emit nothing beyond radius 0.
  EXPECT_EQ(fp::ecfp(parse_smiles("C"), config(fp::Kind::ecfp, true, 3)).total(), 1u);
}

TEST(Ecfp, EthaneRadiusOne) {
  auto ids = fp::ecfp_identifiers(parse_smiles("CC"), 1);
  std::set<std::uint64_t> distinct(ids.begin(), ids.end());
  EXPECT_EQ(distinct.size(), 2u);
  // Two radius-0 atoms plus one radius-1 environment covering the only bond.
  EXPECT_EQ(ids.size(), 3u);
}

TEST(Ecfp, PropaneEnvironments) {
  // Hand count: radius 0 -> CH3 x2, CH2; radius 1 -> CH3 envs {b0},{b1} and
  // CH2 env {b0,b1}; radius 2 -> every env covers {b0,b1}, already seen.
  auto ids = fp::ecfp_identifiers(parse_smiles("CCC"), 2);
  EXPECT_EQ(ids.size(), 6u);
  std::set<std::uint64_t> distinct(ids.begin(), ids.end());
  EXPECT_EQ(distinct.size(), 4u);
}

TEST(Ecfp, OrderInvariant) {
  for (int r = 0; r <= 3; ++r) {
    auto cfg = config(fp::Kind::ecfp, true, r);
    EXPECT_EQ(fp::ecfp(parse_smiles("OCC"), cfg), fp::ecfp(parse_smiles("CCO"), cfg));
  }
}

TEST(Ecfp, KekuleAndAromaticAgree) {
  auto cfg = config(fp::Kind::ecfp);
  EXPECT_EQ(fp::ecfp(parse_smiles("C1=CC=CC=C1O"), cfg), fp::ecfp(parse_smiles("Oc1ccccc1"), cfg));
}

TEST(Ecfp, RadiusMonotonicity) {
  for (auto smi : testdata::kCorpus) {
    auto m = parse_smiles(smi);
    for (int r = 0; r < 4; ++r) {
      auto lo = fp::ecfp_identifiers(m, r);
      auto hi = fp::ecfp_identifiers(m, r + 1);
      std::set<std::uint64_t> hs(hi.begin(), hi.end());
      for (auto id : lo) EXPECT_TRUE(hs.count(id)) << smi << " r=" << r;
    }
  }
}

TEST(Ecfp, RejectsWrongKind) {
  EXPECT_THROW(fp::ecfp(parse_smiles("C"), config(fp::Kind::atom_pair)), std::invalid_argument);
  EXPECT_THROW(fp::compute(parse_smiles("C"), config(fp::Kind::ecfp, true, 11)), std::invalid_argument);
  EXPECT_THROW(fp::compute(parse_smiles("C"), config(fp::Kind::ecfp, true, 2, 1000)), std::invalid_argument);
}

TEST(AtomPair, Examples) {
  auto v = fp::atom_pair(parse_smiles("CCO"), config(fp::Kind::atom_pair));
  auto ids = fp::atom_pair_identifiers(parse_smiles("CCO"));
  EXPECT_EQ(std::set<std::uint64_t>(ids.begin(), ids.end()).size(), 3u);
  EXPECT_EQ(v.total(), 3u);
  EXPECT_EQ(fp::atom_pair(parse_smiles("C"), config(fp::Kind::atom_pair)).total(), 0u);

  auto benzene = fp::atom_pair_identifiers(parse_smiles("c1ccccc1"));
  std::map<std::uint64_t, int> counts;
  for (auto id : benzene) ++counts[id];
  std::vector<int> c;
  for (auto& [_, k] : counts) c.push_back(k);
  std::sort(c.begin(), c.end());
  EXPECT_EQ(c, (std::vector<int>{3, 6, 6}));
}

TEST(AtomPair, CrossFragmentPairsIgnored) {
  EXPECT_EQ(fp::atom_pair(parse_smiles("C.C"), config(fp::Kind::atom_pair)).total(), 0u);
  EXPECT_EQ(fp::atom_pair(parse_smiles("CC.O"), config(fp::Kind::atom_pair)).total(), 1u);
}

TEST(AtomPair, MatchesExhaustiveEnumeration) {
  int checked = 0;
  for (auto smi : testdata::kCorpus) {
    auto m = parse_smiles(smi);
    if (m.atom_count() > 12) continue;
    auto oracle = pair_oracle(m);
    int total = 0;
    for (auto& [_, k] : oracle) total += k;
    auto ids = fp::atom_pair_identifiers(m);
    EXPECT_EQ(static_cast<int>(ids.size()), total) << smi;
    // Grouping agrees too: multiset of class sizes.
    std::map<std::uint64_t, int> got;
    for (auto id : ids) ++got[id];
    std::vector<int> a, b;
    for (auto& [_, k] : oracle) a.push_back(k);
    for (auto& [_, k] : got) b.push_back(k);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b) << smi;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Torsion, Examples) {
  auto cfg = config(fp::Kind::topological_torsion);
  EXPECT_EQ(fp::topological_torsion(parse_smiles("CCC"), cfg).total(), 0u);
  auto butane = fp::topological_torsion(parse_smiles("CCCC"), cfg);
  EXPECT_EQ(nonzero(butane), 1);
  EXPECT_EQ(butane.total(), 1u);
  auto benzene = fp::topological_torsion(parse_smiles("c1ccccc1"), cfg);
  EXPECT_EQ(sorted_nonzero_counts(benzene), (std::vector<std::uint32_t>{6}));
}

TEST(Torsion, MatchesBruteForcePathCount) {
  for (auto smi : testdata::kCorpus) {
    auto m = parse_smiles(smi);
    if (m.atom_count() > 12) continue;
    EXPECT_EQ(static_cast<int>(fp::torsion_identifiers(m).size()), torsion_oracle(m)) << smi;
  }
}

TEST(Fingerprints, BinaryIsBinarizedCount) {
  for (auto kind : {fp::Kind::ecfp, fp::Kind::atom_pair, fp::Kind::topological_torsion}) {
    for (auto smi : testdata::kCorpus) {
      auto m = parse_smiles(smi);
      auto counted = fp::compute(m, config(kind, true));
      auto binary = fp::compute(m, config(kind, false));
      ASSERT_EQ(counted.values.size(), binary.values.size());
      for (std::size_t i = 0; i < counted.values.size(); ++i) {
        EXPECT_EQ(binary.values[i], counted.values[i] ? 1u : 0u);
      }
      EXPECT_LE(binary.total(), counted.total());
    }
  }
}

TEST(Fingerprints, PermutedSmilesGiveIdenticalVectors) {
  std::uint32_t seed = 17;
  for (auto smi : testdata::kCorpus) {
    auto m = parse_smiles(smi);
    auto permuted = parse_smiles(testdata::random_smiles(m, seed++));
    for (auto kind : {fp::Kind::ecfp, fp::Kind::atom_pair, fp::Kind::topological_torsion}) {
      EXPECT_EQ(fp::compute(m, config(kind)), fp::compute(permuted, config(kind))) << smi;
    }
  }
}

TEST(Fingerprints, ParallelMatrixMatchesSerial) {
  std::vector<molgraph::Molecule> mols;
  for (auto smi : testdata::kCorpus) mols.push_back(parse_smiles(smi));
  for (auto kind : {fp::Kind::ecfp, fp::Kind::atom_pair, fp::Kind::topological_torsion}) {
    auto cfg = config(kind, true, 2, 1024);
    auto par = fp::fingerprint_matrix(mols, cfg);
    EXPECT_EQ(par, fp::fingerprint_matrix_serial(mols, cfg));
    EXPECT_EQ(par.rows, 100);
    EXPECT_EQ(par.cols, 1024);
    auto row = par.row(3);
    auto single = fp::compute(mols[3], cfg);
    EXPECT_TRUE(std::equal(row.begin(), row.end(), single.values.begin()));
  }
}

TEST(Fingerprints, Labels) {
  EXPECT_EQ(config(fp::Kind::ecfp).label(), "ECFP-count");
  EXPECT_EQ(config(fp::Kind::atom_pair, false).label(), "AtomPair-binary");
  EXPECT_EQ(config(fp::Kind::topological_torsion, true, 2, 1024).label(), "Torsion-1024-count");
  EXPECT_EQ(fp::kind_from_string("tt"), fp::Kind::topological_torsion);
  EXPECT_THROW(fp::kind_from_string("maccs"), std::invalid_argument);
}
