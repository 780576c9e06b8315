// Prints sigma/4a against mu0 at ka = 0.3 for the three statistics, then
// swaps in a custom phase-shift provider (a disk of radius 1.1a, still
// reported in units of a).

#include <cstdio>

#include "abscatter/abscatter.hpp"

namespace {

struct ScaledDisk {
    double radius_scale = 1.1;

    abscatter::ChannelShift operator()(int m, abscatter::FluxParameter flux, double ka) const
    {
        return abscatter::hard_disk_phase_shift(m, flux, ka * radius_scale);
    }
};

}  // namespace

int main()
{
    using namespace abscatter;
    std::printf("%8s %16s %16s %16s\n", "mu0", "distinguishable", "boson", "fermion");
    for (int i = 0; i <= 12; ++i) {
        const double mu0 = -1.5 + 0.25 * i;
        double row[3];
        int k = 0;
        for (auto s : {Statistics::distinguishable, Statistics::boson, Statistics::fermion}) {
            row[k++] = total_cross_section(ScatteringPoint{0.3, FluxParameter{mu0}, s, {}}).normalized;
        }
        std::printf("%8.3f %16.10f %16.10f %16.10f\n", mu0, row[0], row[1], row[2]);
    }

    const ScatteringPoint p{0.3, FluxParameter{0.25}, Statistics::distinguishable, {}};
    std::printf("\nhard disk a:      sigma/a = %.12f\n", total_cross_section(p).sigma_t);
    std::printf("hard disk 1.1a:   sigma/a = %.12f\n", total_cross_section(p, ScaledDisk{}).sigma_t);
    return 0;
}
