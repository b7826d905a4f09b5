#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "halphen_lab/io.hpp"

using namespace hl;

TEST_CASE("number formatting round-trips")
{
    for (double x : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.0})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV quoting")
{
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    std::string line = csv_field("x,y") + "," + csv_field("q\"") + ",3";
    auto f = split_csv_line(line);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == "x,y");
    CHECK(f[1] == "q\"");
    CHECK(f[2] == "3");
    CHECK(split_csv_line("a,,b\r").size() == 3);

    try {
        split_csv_line("\"open,1");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

TEST_CASE("trajectory CSV round trip")
{
    auto traj = integrate(System::DarbouxHalphen, {{1.0, 2.0, 3.0}, 1.0}, 3.0, 1e-10);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    auto back = read_trajectory_csv(is, System::DarbouxHalphen);
    REQUIRE(back.samples.size() == traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        CHECK(back.samples[i].T == traj.samples[i].T);
        for (int c = 0; c < 3; ++c) {
            CHECK(back.samples[i].Omega[c] == traj.samples[i].Omega[c]);
            CHECK(back.samples[i].Omega_dot[c] == traj.samples[i].Omega_dot[c]);
        }
    }
    std::ostringstream again;
    write_trajectory_csv(again, back);
    CHECK(again.str() == os.str());
}

TEST_CASE("malformed trajectory CSV")
{
    auto expect_parse = [](const std::string& text) {
        std::istringstream is(text);
        try {
            read_trajectory_csv(is, System::DarbouxHalphen);
            FAIL("expected ParseError for: " << text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    };
    expect_parse("");
    expect_parse("T,Omega1,Omega2\n1,2,3\n");
    expect_parse("T,Omega1,Omega2,Omega3,Omega1_dot,Omega2_dot,Omega3_dot\n1,2,3,4,5,6\n");
    expect_parse("T,Omega1,Omega2,Omega3,Omega1_dot,Omega2_dot,Omega3_dot\n1,2,abc,4,5,6,7\n");
    expect_parse("T,Omega1,Omega2,Omega3,Omega1_dot,Omega2_dot,Omega3_dot\n1,2,3x,4,5,6,7\n");
    expect_parse("X,Omega1,Omega2,Omega3,Omega1_dot,Omega2_dot,Omega3_dot\n");
}

TEST_CASE("JSON documents parse")
{
    auto traj = sample_halphen(1.0, 3.0, 40);
    auto j = nlohmann::json::parse(trajectory_json(traj));
    CHECK(j["system"].is_string());
    CHECK(j["samples"].size() == 40);
    CHECK(j["samples"][0]["Omega"].size() == 3);
    CHECK(j["samples"][0]["T"].get<double>() == traj.samples[0].T);

    auto c = nlohmann::json::parse(curvature_report_json(traj));
    CHECK(c["samples"].size() == 40);
    CHECK(c["samples"][5]["flags"]["self_dual"].get<bool>());
    CHECK(c["endpoints"]["lower"]["kind"].is_string());

    auto run = flow_run({{1.0, 2.0, 3.0}, 1.0}, 50.0, 1e-10);
    auto f = nlohmann::json::parse(flow_summary_json(run));
    CHECK(f["trapped"].get<bool>());
    CHECK(f["asymptote_deviation"].get<double>() < 0.1);

    std::ostringstream os;
    write_flow_csv(os, run);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(split_csv_line(header).size() == 7);
}
