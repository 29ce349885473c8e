// Recover 1/(s+e^{-s}) + 1/(s+0.3e^{-s}) from value and derivative samples
// at two real points, with and without the delay in the reduced model.
#include <cstdio>

#include <dloewner/dloewner.hpp>

using namespace dloewner;

int main()
{
    const SystemOracle H = from_expression("(2*s+1.3*exp(-s))/(s^2+1.3*s*exp(-s)+0.3*exp(-2*s))");
    const std::vector<Complex> shifts{0.1, 1.0};
    const std::vector<ComplexVector> ones(2, ComplexVector::Ones(1));

    const DelayDescriptorModel delayed = build_hermite_delay_loewner(H, shifts, ones, ones, 1.0).model;
    const DelayDescriptorModel plain   = build_hermite_loewner(H, shifts, ones, ones).model;

    std::printf("%10s %14s %14s %14s\n", "omega", "|H|", "err(delay)", "err(no delay)");
    for (double w : logspace(0.01, 100.0, 9))
    {
        const Complex s(0.0, w);
        const Complex h = H.eval(s)(0, 0);
        std::printf("%10.4g %14.6g %14.3e %14.3e\n", w, std::abs(h),
                    std::abs(delayed.transfer(s)(0, 0) - h) / std::abs(h),
                    std::abs(plain.transfer(s)(0, 0) - h) / std::abs(h));
    }

    std::printf("\ndelay poles (branches -1, 0, 1):\n");
    for (Complex p : delay_poles(delayed, {BranchIndex{-1}, BranchIndex{0}, BranchIndex{1}}))
        std::printf("  %+.6f %+.6fi\n", p.real(), p.imag());
}
