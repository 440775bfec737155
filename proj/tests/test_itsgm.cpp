#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "grom/itsgm.hpp"
#include "grom/toyflow.hpp"
#include "test_support.hpp"

using namespace grom;
using namespace testsup;

namespace {

/// Sample set over the rotating-subspace family; the subspaces form an exact
/// geodesic line with angle equal to gamma.
SampleSet rotation_samples(const RotatingSubspace& fam, std::initializer_list<double> gammas) {
  std::vector<std::vector<double>> params;
  std::vector<SvdTriple> triples;
  std::mt19937_64 rng(99);
  for (double g : gammas) {
    params.push_back({g});
    // Temporal side and singular values are placeholders; itsgm only uses U.
    triples.push_back(SvdTriple{exact_subspace(fam, g),
                                std::vector<double>(fam.rank, 1.0),
                                random_basis(rng, fam.rank + 2, fam.rank)});
  }
  // All samples must share the same temporal basis shape; rebuild with one.
  const OrthonormalBasis vshared = triples.front().v;
  for (auto& t : triples) t = SvdTriple{t.u, t.sigma, vshared};
  return SampleSet(std::move(params), std::move(triples));
}

}  // namespace

TEST_CASE("sample set validation") {
  std::mt19937_64 rng(1);
  const OrthonormalBasis u = random_basis(rng, 10, 3);
  const OrthonormalBasis v = random_basis(rng, 6, 3);
  const SvdTriple t{u, {3.0, 2.0, 1.0}, v};

  CHECK_THROWS_AS(SampleSet({{0.0}}, {t}), config_error);                    // too few
  CHECK_THROWS_AS(SampleSet({{0.0}, {0.0}}, {t, t}), config_error);          // duplicates
  CHECK_THROWS_AS(SampleSet({{0.0}, {1.0, 2.0}}, {t, t}), config_error);     // mixed d
  CHECK_THROWS_AS(SampleSet({{0.0}}, {t, t}), config_error);                 // count mismatch

  const SvdTriple wrong{random_basis(rng, 10, 2), {1.0, 1.0}, random_basis(rng, 6, 2)};
  CHECK_THROWS_WITH_AS(SampleSet({{0.0}, {1.0}}, {t, wrong}),
                       doctest::Contains("shapes"), config_error);

  const SampleSet ok({{0.0}, {1.0}}, {t, t});
  CHECK(ok.size() == 2);
  CHECK(ok.spatial_dim() == 10);
  CHECK(ok.temporal_dim() == 6);
  CHECK(ok.rank() == 3);
}

TEST_CASE("offline stage: reference velocity is exactly zero") {
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.2, 0.4});
  const TangentCache cache = itsgm_offline(ss, 1);
  CHECK(cache.ref_index == 1);
  CHECK(cache.velocities[1].delta().max_abs() == 0.0);
  CHECK_THROWS_AS(itsgm_offline(ss, 3), config_error);
}

TEST_CASE("offline stage: rotation-family velocity norms equal the angles") {
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.4});
  const TangentCache cache = itsgm_offline(ss, 0);
  CHECK(cache.velocities[0].norm() == 0.0);
  CHECK(cache.velocities[1].norm() == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("offline stage: cache invariant, exp recovers every sample") {
  RotatingSubspace fam{20, 4};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.3, 0.6, 0.9});
  const TangentCache cache = itsgm_offline(ss, 0);
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const OrthonormalBasis back = exp_map(ss.triple(0).u, cache.velocities[i]);
    CHECK(geodesic_distance(back, ss.triple(i).u) <= 1e-8);
  }
}

TEST_CASE("offline stage: out-of-neighborhood sample is named") {
  // gamma = pi/2 puts the rotated direction orthogonal to the reference's
  // first column: the cross-Gram is singular.
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 1.5707963267948966});
  CHECK_THROWS_WITH_AS(itsgm_offline(ss, 0), doctest::Contains("sample 1"),
                       numerical_error);
}

TEST_CASE("degenerate family: identical subspaces give zero velocities") {
  std::mt19937_64 rng(2);
  const OrthonormalBasis u = random_basis(rng, 12, 3);
  const OrthonormalBasis v = random_basis(rng, 8, 3);
  const SvdTriple t{u, {1.0, 1.0, 1.0}, v};
  const SampleSet ss({{0.0}, {1.0}}, {t, t});
  const TangentCache cache = itsgm_offline(ss, 0);
  CHECK(cache.velocities[0].norm() == 0.0);
  CHECK(cache.velocities[1].norm() <= 1e-12);
}

TEST_CASE("tangent interpolation reproduces trained velocities for all methods") {
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.2, 0.4, 0.6});
  const TangentCache cache = itsgm_offline(ss, 0);
  const std::vector<TangentInterpolator> methods{
      TangentInterpolator::Lagrange(),
      TangentInterpolator::Rbf(RbfKernel::gaussian, 0.3),
      TangentInterpolator::Idw(2.0)};
  for (const auto& m : methods) {
    for (std::size_t j = 0; j < ss.size(); ++j) {
      const TangentVector v = interpolate_tangent(cache, ss, ss.params()[j], m);
      CHECK(frob_diff(v.delta(), cache.velocities[j].delta()) <= 1e-10);
    }
  }
  // Query at the reference gives the zero velocity.
  const TangentVector vref =
      interpolate_tangent(cache, ss, {0.0}, TangentInterpolator::Lagrange());
  CHECK(vref.norm() <= 1e-12);
}

TEST_CASE("rotation family: midpoint velocity norm equals the midpoint angle") {
  // Velocities of this family are linear in gamma, so Lagrange on three
  // samples is exact everywhere.
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.3, 0.6});
  const TangentCache cache = itsgm_offline(ss, 0);
  const TangentVector v =
      interpolate_tangent(cache, ss, {0.45}, TangentInterpolator::Lagrange());
  CHECK(v.norm() == doctest::Approx(0.45).epsilon(1e-10));
}

TEST_CASE("end to end: trained samples and geodesic queries") {
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.1, 0.35, 0.6});
  const auto lag = TangentInterpolator::Lagrange();
  // Reference reproduction.
  const OrthonormalBasis at_ref = itsgm_interpolate(ss, {0.1}, 0, lag);
  CHECK(geodesic_distance(at_ref, ss.triple(0).u) <= 1e-8);
  // Sample exactness at every trained parameter, every method.
  for (const auto& m : {TangentInterpolator::Lagrange(),
                        TangentInterpolator::Rbf(RbfKernel::multiquadric, 0.4),
                        TangentInterpolator::Idw(3.0)}) {
    for (std::size_t j = 0; j < ss.size(); ++j) {
      const OrthonormalBasis out = itsgm_interpolate(ss, ss.params()[j], 0, m);
      CHECK(geodesic_distance(out, ss.triple(j).u) <= 1e-8);
    }
  }
  // Untrained query against the closed-form subspace.
  const OrthonormalBasis mid = itsgm_interpolate(ss, {0.45}, 0, lag);
  CHECK(geodesic_distance(mid, exact_subspace(fam, 0.45)) <= 1e-8);
}

TEST_CASE("cache transparency: offline+online equals the monolithic path") {
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.25, 0.5});
  const auto lag = TangentInterpolator::Lagrange();
  const TangentCache cache = itsgm_offline(ss, 0);
  for (double g : {0.1, 0.37, 0.48}) {
    const OrthonormalBasis cached = itsgm_query(cache, ss, {g}, lag);
    const OrthonormalBasis direct = itsgm_interpolate(ss, {g}, 0, lag);
    CHECK(frob_diff(cached.matrix(), direct.matrix()) <= 1e-12);
  }
}

TEST_CASE("reference sensitivity: every admissible reference stays accurate") {
  RotatingSubspace fam{16, 3};
  const SampleSet ss = rotation_samples(fam, {0.0, 0.2, 0.4, 0.6, 0.8});
  const auto lag = TangentInterpolator::Lagrange();
  for (std::size_t ref = 0; ref < ss.size(); ++ref) {
    const OrthonormalBasis out = itsgm_interpolate(ss, {0.5}, ref, lag);
    CHECK(geodesic_distance(out, exact_subspace(fam, 0.5)) <= 1e-6);
  }
}
