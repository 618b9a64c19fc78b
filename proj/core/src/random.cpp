#include "dudley/random.hpp"

namespace dudley {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void random_unit(Rng& rng, Vector& out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double n2 = 0.0;
  do {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = gauss(rng);
    n2 = out.squaredNorm();
  } while (n2 < 1e-24);
  out /= std::sqrt(n2);
}

Vector random_unit(Rng& rng, std::size_t dim) {
  Vector v(static_cast<Eigen::Index>(dim));
  random_unit(rng, v);
  return v;
}

}  // namespace dudley
