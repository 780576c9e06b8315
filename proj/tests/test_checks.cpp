#include <algorithm>
#include <string>

#include "catch_amalgamated.hpp"

#include "abscatter/checks.hpp"

using namespace abscatter;
using namespace abscatter::checks;

namespace {

const CheckItem* find(const std::vector<CheckItem>& items, const std::string& name)
{
    const auto it = std::find_if(items.begin(), items.end(), [&](const auto& i) { return i.name == name; });
    return it == items.end() ? nullptr : &*it;
}

}  // namespace

TEST_CASE("default battery passes", "[checks]")
{
    const auto items = run_battery();
    for (const char* name : {"wronskian", "half_integer_closed_forms", "flux_periodicity", "reflection_symmetry",
                             "partition_identity", "parseval", "optical_theorem"}) {
        const auto* item = find(items, name);
        REQUIRE(item);
        INFO(name << " worst=" << item->worst << " " << item->detail);
        CHECK(item->passed);
        CHECK(item->worst <= item->tolerance);
    }
    CHECK(items.size() == 7);
}

TEST_CASE("point items are added on request", "[checks]")
{
    CheckOptions opts;
    opts.ka = 2.0;
    opts.mu0 = 0.3;
    const auto items = run_battery(opts);
    const auto* optical = find(items, "optical_theorem[ka=2.000000,mu0=0.300000]");
    REQUIRE(optical);
    CHECK(optical->passed);
    CHECK(optical->worst <= 1e-10);
    CHECK(std::all_of(items.begin(), items.end(), [](const auto& i) { return i.passed; }));
}

TEST_CASE("random battery is reproducible and passes", "[checks]")
{
    CheckOptions opts;
    opts.seed = 7;
    opts.random_points = 50;
    const auto a = run_battery(opts);
    const auto b = run_battery(opts);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        INFO(a[i].name << " " << a[i].detail);
        CHECK(a[i].passed);
        CHECK(a[i].worst == b[i].worst);
    }
    const auto* rnd = find(a, "random:optical_theorem");
    REQUIRE(rnd);
    CHECK(rnd->detail.starts_with("50 points"));
}

TEST_CASE("a failing identity is reported with its point", "[checks]")
{
    const auto item = checks::detail::scan("always_fails", 1e-10, {{1.0, 0.0}, {2.0, 0.5}}, [](double, double) { return 1.0; });
    CHECK_FALSE(item.passed);
    CHECK(item.worst == 1.0);
    CHECK(item.detail.find("first failure at ka=1.000000") != std::string::npos);

    const auto thrown = checks::detail::scan("throws", 1e-10, {{1.0, 0.0}}, [](double, double) -> double {
        throw PrecisionError("boom");
    });
    CHECK_FALSE(thrown.passed);
    CHECK(thrown.detail.find("boom") != std::string::npos);
}
