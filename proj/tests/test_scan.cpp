#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qppf/constants.hpp"
#include "qppf/scan.hpp"

using namespace qppf;
using namespace qppf::scan;
namespace cn = qppf::constants;

namespace {

std::shared_ptr<const material::Material> window_silica() {
    static auto m = std::make_shared<material::Material>(
        material::load_material(QPPF_DATA_DIR "/silica-window.mat"));
    return m;
}

ScanSetup setup_for_mass(double amu, double fluence) {
    ScanSetup s;
    s.particle = ParticleSpec::from_mass(amu * cn::amu, window_silica());
    s.grating.wavelength = 100e-9;
    s.grating.fluence = fluence;
    s.environment.temperature = 20.0;
    s.environment.pressure = 1e-11;
    s.environment.gas = material::load_gas(QPPF_DATA_DIR "/hydrogen.gas");
    s.samples = 384;
    return s;
}

std::string scan_to_string(const ScanResult& r) {
    std::ostringstream os;
    write_scan_csv(os, r);
    return os.str();
}

} // namespace

TEST_SUITE("scan.grid") {

TEST_CASE("validation rejects bad axes and infeasible fluences") {
    ScanGrid g;
    g.t1_values = {1.0, 2.0};
    g.t2_values = {2.0, 1.0}; // not increasing
    g.fluence_values = {1e-5};
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.t2_values = {1.0, 2.0};
    g.fluence_values = {1e-8}; // below feasible range
    CHECK_THROWS_AS(g.validate(), DomainError);
    g.fluence_values = {1e-5};
    g.t_max = 1.0; // no feasible (t1, t2)
    CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("spacing helpers") {
    auto lin = ScanGrid::linear(1.0, 3.0, 3);
    CHECK(lin[1] == doctest::Approx(2.0));
    auto lg = ScanGrid::logarithmic(1e-6, 1e-2, 5);
    CHECK(lg[1] / lg[0] == doctest::Approx(10.0).epsilon(1e-12));
}

} // TEST_SUITE

TEST_SUITE("scan.optimize") {

TEST_CASE("degenerate 1x1x1 grid returns that cell") {
    ScanGrid g;
    g.t1_values = {6.0};
    g.t2_values = {6.0};
    g.fluence_values = {1e-5};
    auto setup = setup_for_mass(1e9, 1e-5);
    auto r = optimize_aleph(g, setup);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.best_index == 0);
    CHECK(r.cells[0].ok);
    CHECK(r.failed == 0);
}

TEST_CASE("triangle constraint removes infeasible pairs") {
    ScanGrid g;
    g.t1_values = {30.0, 60.0};
    g.t2_values = {30.0, 60.0};
    g.fluence_values = {1e-5};
    g.t_max = 100.0;
    auto r = optimize_aleph(g, setup_for_mass(1e9, 1e-5));
    CHECK(r.cells.size() == 3); // (60, 60) dropped
}

TEST_CASE("coarse grid at 1e8 amu crosses the distinguishability threshold") {
    ScanGrid g;
    g.t1_values = ScanGrid::linear(6.0, 48.0, 8);
    g.t2_values = ScanGrid::linear(6.0, 48.0, 8);
    g.fluence_values = ScanGrid::logarithmic(1e-6, 5.0, 12);
    auto setup = setup_for_mass(1e8, 1e-4);
    setup.samples = 256;
    auto r = optimize_aleph(g, setup);
    CHECK(failure_fraction(r) <= 0.01);
    CHECK(r.best_index >= 0);
    CHECK(r.best_value > 0.05);
}

TEST_CASE("1e7 amu near the reference protocol clears the CSL threshold") {
    ScanGrid g;
    g.t1_values = {11.0, 12.0, 13.0};
    g.t2_values = {11.0, 12.0, 13.0};
    g.fluence_values = {0.8e-2, 1.1e-2, 1.5e-2};
    auto setup = setup_for_mass(1e7, 1.1e-2);
    setup.target = Target::kQcsl;
    auto r = optimize_aleph(g, setup);
    CHECK(r.best_value > 0.05);
}

TEST_CASE("determinism: identical output bytes for 1 and 4 workers") {
    ScanGrid g;
    g.t1_values = ScanGrid::linear(5.0, 25.0, 4);
    g.t2_values = ScanGrid::linear(5.0, 25.0, 4);
    g.fluence_values = ScanGrid::logarithmic(1e-6, 1e-3, 4);
    auto setup = setup_for_mass(1e9, 1e-5);
    setup.samples = 256;
    setup.workers = 1;
    auto r1 = optimize_aleph(g, setup);
    setup.workers = 4;
    auto r4 = optimize_aleph(g, setup);
    CHECK(scan_to_string(r1) == scan_to_string(r4));
    CHECK(r1.best_index == r4.best_index);
}

TEST_CASE("checkpoint resume reproduces an uninterrupted run") {
    ScanGrid g;
    g.t1_values = {8.0, 16.0};
    g.t2_values = {8.0, 16.0};
    g.fluence_values = {1e-5, 1e-4};
    auto setup = setup_for_mass(1e9, 1e-5);
    setup.samples = 256;

    auto full = optimize_aleph(g, setup);

    // simulate an interrupted run: checkpoint containing the first 3 cells
    std::string path = "/tmp/qppf_scan_ckpt_test.csv";
    std::remove(path.c_str());
    setup.checkpoint_path = path;
    {
        // run once to produce the checkpoint, then truncate it to 3 lines
        auto first = optimize_aleph(g, setup);
        std::ifstream in(path);
        std::string line, kept;
        int n = 0;
        while (std::getline(in, line) && n < 3) {
            kept += line + "\n";
            ++n;
        }
        in.close();
        std::ofstream out(path, std::ios::trunc);
        out << kept;
    }
    auto resumed = optimize_aleph(g, setup);
    CHECK(scan_to_string(resumed) == scan_to_string(full));
    std::remove(path.c_str());
}

} // TEST_SUITE

TEST_SUITE("scan.exclusion") {

TEST_CASE("zero threshold pins the curve to the bracket floor") {
    auto setup = setup_for_mass(1e9, 8.7e-6);
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    auto curve = exclusion_curve({1e-7}, 0.0, setup, pr);
    CHECK(curve.lambda_min[0] == doctest::Approx(1e-20));
    CHECK(curve.status[0] == "ok");
}

TEST_CASE("GRW point excluded at 1e9 amu") {
    auto setup = setup_for_mass(1e9, 8.7e-6);
    ProtocolSpec pr;
    pr.t1 = pr.t2 = 10.0;
    auto curve = exclusion_curve({1e-7}, 0.05, setup, pr);
    REQUIRE(curve.status[0] == "ok");
    CHECK(curve.lambda_min[0] <= 1e-16);
}

TEST_CASE("lambda_min decreases with mass between 1e7 and 1e9 amu") {
    ProtocolSpec pr7;
    pr7.t1 = pr7.t2 = 12.0;
    auto c7 = exclusion_curve({1e-7}, 0.05, setup_for_mass(1e7, 1.1e-2), pr7);
    ProtocolSpec pr9;
    pr9.t1 = pr9.t2 = 10.0;
    auto c9 = exclusion_curve({1e-7}, 0.05, setup_for_mass(1e9, 8.7e-6), pr9);
    REQUIRE(c7.status[0] == "ok");
    REQUIRE(c9.status[0] == "ok");
    CHECK(c9.lambda_min[0] <= c7.lambda_min[0]);
}

TEST_CASE("csv writers emit the documented schemas") {
    ScanResult r;
    CellResult c;
    c.index = 0;
    c.t1 = 1.0;
    c.t2 = 2.0;
    c.fluence = 1e-5;
    c.aleph_qc = 0.1;
    c.aleph_qcsl = 0.2;
    c.ok = true;
    r.cells.push_back(c);
    std::ostringstream os;
    write_scan_csv(os, r);
    CHECK(os.str().rfind("t1_s,t2_s,fluence_J_per_m2,aleph_qc,aleph_qcsl\n", 0) == 0);

    ExclusionCurve e;
    e.rc = {1e-7};
    e.lambda_min = {1e-12};
    e.status = {"ok"};
    std::ostringstream os2;
    write_exclusion_csv(os2, e);
    CHECK(os2.str().rfind("r_c_m,lambda_min_per_s,status\n", 0) == 0);
}

} // TEST_SUITE
