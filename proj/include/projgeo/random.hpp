#pragma once
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace projgeo {

// splitmix64; used to derive independent per-trial seeds so that
// parallel suites give identical results for any thread count.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0) {
    return std::mt19937_64(split_seed(seed, index));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::VectorXd random_unit_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(dim);
    do {
        for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int dim, double scale) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(rng, -scale, scale);
    return v;
}

}  // namespace projgeo
