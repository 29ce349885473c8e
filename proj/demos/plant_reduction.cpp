// Reduce a 48-state damped plant with a small input delay by delay
// TF-IRKA and by delay-free TF-IRKA, and compare H2 errors.
#include <cstdio>
#include <random>

#include <Eigen/QR>

#include <dloewner/dloewner.hpp>

using namespace dloewner;

namespace
{

DelayDescriptorModel damped_plant(std::uint64_t seed, Index n)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logw(std::log(0.2), std::log(5.0)), zeta(0.1, 0.5);
    std::normal_distribution<double> g;
    RealMatrix D = RealMatrix::Zero(n, n);
    for (Index k = 0; k + 1 < n; k += 2)
    {
        const double w = std::exp(logw(rng)), z = zeta(rng);
        D(k, k) = D(k + 1, k + 1) = -z * w;
        D(k, k + 1)               = w * std::sqrt(1.0 - z * z);
        D(k + 1, k)               = -D(k, k + 1);
    }
    auto rand = [&](Index r, Index c) {
        RealMatrix m(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j)
                m(i, j) = g(rng);
        return m;
    };
    const RealMatrix Q = Eigen::HouseholderQR<RealMatrix>(rand(n, n)).householderQ();
    const RealMatrix B = rand(n, 1), C = rand(1, n);
    return DelayDescriptorModel::from_real(RealMatrix::Identity(n, n), Q * D * Q.transpose(), B, C);
}

} // namespace

int main(int argc, char** argv)
{
    const double tau = 0.01;
    const int r      = argc > 1 ? std::atoi(argv[1]) : 6;
    const DelayDescriptorModel full = inject_delay(damped_plant(48, 48), tau);
    const SystemOracle H = from_model(full);
    const IrkaState init = default_initial_state(H, r, 0.1, 1.0);

    const IrkaReport d = dtf_irka(H, r, tau, init);
    const IrkaReport t = tf_irka(H, r, init);

    const double norm = h2_norm(H);
    std::printf("order %d, ||H|| = %.4g\n", r, norm);
    std::printf("delay TF-IRKA:   %3d iterations, converged %d, rel H2 error %.3e\n", d.iterations,
                d.converged, h2_error(H, from_model(d.final_model)) / norm);
    std::printf("delay-free IRKA: %3d iterations, converged %d, rel H2 error %.3e\n", t.iterations,
                t.converged, h2_error(H, from_model(t.final_model)) / norm);
}
