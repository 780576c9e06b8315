#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"

#include "abscatter/sweep.hpp"

using namespace abscatter;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Hard disk, except that points with ka > 5 never converge.
struct FailsAboveFive {
    ChannelShift operator()(int m, FluxParameter flux, double ka) const
    {
        if (ka > 5.0) return channel_from_pair(m, flux.order_for_channel(m), 1.0, 1.0);
        return hard_disk_phase_shift(m, flux, ka);
    }
};

std::string csv_of(const std::vector<SweepRow>& rows)
{
    std::ostringstream s;
    write_csv(s, rows);
    return s.str();
}

std::vector<SweepRow> preset_rows(std::string_view name)
{
    const auto grids = preset(name);
    REQUIRE(grids);
    return run_sweeps(*grids);
}

}  // namespace

TEST_CASE("axis values", "[sweep]")
{
    SweepGrid lin{SweepAxis::mu0, -3.0, 3.0, 601, Spacing::linear, 0.3};
    const auto v = lin.axis_values();
    REQUIRE(v.size() == 601);
    CHECK(v.front() == -3.0);
    CHECK(v.back() == 3.0);
    CHECK(v[300] == 0.0);
    CHECK_THAT(v[250], WithinAbs(-0.5, 1e-15));
    CHECK(std::is_sorted(v.begin(), v.end()));

    SweepGrid lg{SweepAxis::ka, 0.01, 20.0, 200, Spacing::log, 0.0};
    const auto w = lg.axis_values();
    CHECK(w.front() == 0.01);
    CHECK(w.back() == 20.0);
    const double step = std::log(w[1] / w[0]);
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        CHECK_THAT(std::log(w[i + 1] / w[i]), WithinRel(step, 1e-9));
    }
}

TEST_CASE("grid validation", "[sweep]")
{
    CHECK_THROWS_AS((SweepGrid{SweepAxis::ka, 0.1, 1.0, 1}.validate()), GridError);
    CHECK_THROWS_AS((SweepGrid{SweepAxis::ka, 1.0, 0.1, 5}.validate()), GridError);
    CHECK_THROWS_AS((SweepGrid{SweepAxis::ka, 1.0, 1.0, 5}.validate()), GridError);
    CHECK_THROWS_AS((SweepGrid{SweepAxis::mu0, -1.0, 1.0, 5, Spacing::log, 0.3}.validate()), GridError);
    CHECK_THROWS_AS((SweepGrid{SweepAxis::ka, 0.0, 1.0, 5}.validate()), GridError);
    CHECK_THROWS_AS((SweepGrid{SweepAxis::mu0, -1.0, 1.0, 5, Spacing::linear, 0.0}.validate()), GridError);
    CHECK_THROWS_AS((SweepGrid{SweepAxis::ka, 0.1, NAN, 5}.validate()), GridError);
    CHECK_NOTHROW((SweepGrid{SweepAxis::mu0, -1.0, 1.0, 2, Spacing::linear, 0.3}.validate()));
    CHECK_THROWS_AS(run_sweep(SweepGrid{SweepAxis::ka, 0.1, 1.0, 0}), GridError);
}

TEST_CASE("rows match single-point evaluation", "[sweep]")
{
    const SweepGrid g{SweepAxis::ka, 0.05, 30.0, 17, Spacing::log, 0.4, Statistics::fermion};
    const auto rows = run_sweep(g, 4);
    const auto axis = g.axis_values();
    REQUIRE(rows.size() == axis.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = total_cross_section(ScatteringPoint{axis[i], FluxParameter{0.4}, Statistics::fermion, {}});
        CHECK(rows[i].ka == axis[i]);
        CHECK(rows[i].mu0 == 0.4);
        CHECK(rows[i].statistics == Statistics::fermion);
        CHECK(rows[i].sigma_over_a == r.sigma_t);
        CHECK(rows[i].sigma_normalized == r.normalized);
        CHECK(rows[i].m_used == r.m_used);
        CHECK(rows[i].tail_bound <= g.truncation.tail_tol);
        CHECK_FALSE(rows[i].poisoned());
    }
}

TEST_CASE("output does not depend on the thread count", "[sweep]")
{
    const SweepGrid g{SweepAxis::mu0, -2.0, 2.0, 81, Spacing::linear, 3.0, Statistics::boson};
    const auto one = csv_of(run_sweep(g, 1));
    CHECK(one == csv_of(run_sweep(g, 3)));
    CHECK(one == csv_of(run_sweep(g, 16)));
    CHECK(one == csv_of(run_sweep(g, 0)));
}

TEST_CASE("poisoned rows are flagged without aborting the sweep", "[sweep]")
{
    const SweepGrid g{SweepAxis::ka, 1.0, 9.0, 9, Spacing::linear, 0.2};
    const auto rows = run_sweep(g, 2, FailsAboveFive{});
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) {
        if (r.ka > 5.0) {
            CHECK(r.flags == "truncation_failure");
            CHECK(r.poisoned());
            CHECK(std::isnan(r.sigma_over_a));
            CHECK(r.m_used == static_cast<int>(10 * r.ka + 1000));
        } else {
            CHECK(r.flags == "ok");
            CHECK(r.sigma_over_a == total_cross_section(ScatteringPoint{r.ka, FluxParameter{0.2}, {}, {}}).sigma_t);
        }
    }
    const auto csv = csv_of(rows);
    CHECK(csv.find(",nan,") != std::string::npos);
    std::ostringstream js;
    write_json(js, rows);
    const auto parsed = nlohmann::json::parse(js.str());
    CHECK(parsed.back()["sigma_over_a"].is_null());
    CHECK(parsed.back()["flags"] == "truncation_failure");
}

TEST_CASE("CSV format", "[sweep]")
{
    const SweepGrid g{SweepAxis::ka, 0.5, 2.0, 3, Spacing::linear, 0.25};
    const auto text = csv_of(run_sweep(g));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == csv_header);
    CHECK(line == "ka,mu0,statistics,sigma_over_a,sigma_over_4a,m_used,tail_bound,flags");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
        CHECK(line.find("distinguishable") != std::string::npos);
        CHECK(line.ends_with(",ok"));
    }
    CHECK(rows == 3);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');

    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(5.856820914806517) == "5.85682091480652");
    CHECK(format_real(1e-14) == "1e-14");
    // 15 significant digits survive a round trip to that precision
    const double v = 0.123456789012345678;
    CHECK_THAT(std::stod(format_real(v)), WithinRel(v, 1e-14));
}

TEST_CASE("JSON format", "[sweep]")
{
    const SweepGrid g{SweepAxis::mu0, 0.0, 1.0, 3, Spacing::linear, 0.3, Statistics::boson};
    const auto rows = run_sweep(g);
    std::ostringstream s;
    write_json(s, rows);
    const auto j = nlohmann::json::parse(s.str());
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (const char* key :
             {"ka", "mu0", "statistics", "sigma_over_a", "sigma_over_4a", "m_used", "tail_bound", "flags"}) {
            CHECK(j[i].contains(key));
        }
        CHECK(j[i]["statistics"] == "boson");
        CHECK(j[i]["sigma_over_a"].get<double>() == rows[i].sigma_over_a);
    }
}

TEST_CASE("preset shapes", "[sweep][preset]")
{
    for (auto name : preset_names) {
        const auto grids = preset(name);
        REQUIRE(grids);
        const bool ka_axis = grids->front().axis == SweepAxis::ka;
        CHECK(grids->size() == (ka_axis ? 6u : 3u));
        for (const auto& g : *grids) {
            CHECK_NOTHROW(g.validate());
            CHECK(g.points == (ka_axis ? 200 : 601));
        }
    }
    CHECK_FALSE(preset("fig7"));
}

TEST_CASE("fig1: half-integer flux suppresses the cross section at low energy", "[sweep][preset]")
{
    // The mu0 = 0 and mu0 = 1/2 curves cross once, near ka = 0.9727.
    const auto diff = [](double ka) {
        return total_cross_section(ScatteringPoint{ka, FluxParameter{0.5}, {}, {}}).sigma_t
               - total_cross_section(ScatteringPoint{ka, FluxParameter{0.0}, {}, {}}).sigma_t;
    };
    CHECK(diff(0.972) < 0.0);
    CHECK(diff(0.973) > 0.0);

    const auto rows = preset_rows("fig1");
    REQUIRE(rows.size() == 6 * 200);
    const auto at_mu = [&](int curve) { return std::span(rows).subspan(curve * 200, 200); };
    const auto zero = at_mu(0);
    const auto half = at_mu(3);
    for (std::size_t i = 0; i < 200; ++i) {
        REQUIRE(half[i].mu0 == 0.5);
        if (zero[i].ka < 0.972) CHECK(half[i].sigma_normalized < zero[i].sigma_normalized);
    }
    // mu0 = 1 curve is the flux-free one
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK_THAT(at_mu(5)[i].sigma_over_a, WithinRel(zero[i].sigma_over_a, 1e-10));
    }
}

TEST_CASE("fig2: period 1 with minima at half-integers", "[sweep][preset]")
{
    const auto rows = preset_rows("fig2");
    REQUIRE(rows.size() == 3 * 601);
    for (int curve = 0; curve < 3; ++curve) {
        const auto c = std::span(rows).subspan(curve * 601, 601);
        for (std::size_t i = 0; i + 100 < c.size(); ++i) {
            CHECK_THAT(c[i + 100].sigma_over_a, WithinRel(c[i].sigma_over_a, 1e-10));
        }
        // local minima exactly at the half-integer grid points
        for (std::size_t i = 1; i + 1 < c.size(); ++i) {
            const bool local_min = c[i].sigma_over_a < c[i - 1].sigma_over_a && c[i].sigma_over_a < c[i + 1].sigma_over_a;
            const bool half_integer = (i % 100) == 50;
            CHECK(local_min == half_integer);
        }
    }
}

TEST_CASE("fig4 and fig6: period 2 with zeros at odd / even integers", "[sweep][preset]")
{
    for (auto [name, zero_parity] : {std::pair{"fig4", 1}, std::pair{"fig6", 0}}) {
        const auto rows = preset_rows(name);
        for (int curve = 0; curve < 3; ++curve) {
            const auto c = std::span(rows).subspan(curve * 601, 601);
            double peak = 0;
            for (const auto& r : c) peak = std::max(peak, r.sigma_over_a);
            for (std::size_t i = 0; i + 200 < c.size(); ++i) {
                CHECK_THAT(c[i + 200].sigma_over_a, WithinRel(c[i].sigma_over_a, 1e-10));
            }
            for (std::size_t i = 0; i < c.size(); i += 100) {
                const int n = static_cast<int>(std::lround(c[i].mu0));
                if (((n % 2) + 2) % 2 == zero_parity) {
                    INFO(name << " ka=" << c[i].ka << " mu0=" << n);
                    CHECK(c[i].sigma_over_a < 0.1 * peak);
                }
            }
        }
    }
}
