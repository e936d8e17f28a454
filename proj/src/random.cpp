#include <hk/random.hpp>

#include <algorithm>
#include <numeric>

namespace hk {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

KForm random_form(int dim, int degree, std::mt19937_64& rng, std::size_t terms) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto basis = blades(dim, degree);
    if (terms == 0 || terms >= basis.size()) {
        std::vector<double> coeffs(basis.size());
        for (double& c : coeffs) c = normal(rng);
        return KForm::from_dense(dim, degree, std::move(coeffs));
    }
    std::vector<std::size_t> order(basis.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < terms; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
        std::swap(order[i], order[pick(rng)]);
    }
    KForm f(dim, degree);
    for (std::size_t i = 0; i < terms; ++i) f.add(basis[order[i]], normal(rng));
    return f;
}

}  // namespace hk
