#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bcc/channel.hpp"
#include "bcc/montecarlo.hpp"

using namespace bcc;

namespace {

DegreeDistribution node_dist(std::map<int, double> c) {
    return DegreeDistribution(Perspective::node, Side::variable, std::move(c));
}

UepCode test_code(long n = 128, std::uint64_t seed = 3) {
    const auto nu = node_dist({{2, 0.45}, {3, 0.35}, {8, 0.2}});
    const auto profile = protection_classes(nu, n, 0.5, 8);
    return build_uep_code(nu, concentrated_check(nu, 0.5), profile, seed, 10);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

ErrorRateCurve synthetic_ps(const std::vector<double>& snr_db,
                            const std::vector<double>& ps) {
    // synthesize counts so the estimates equal the requested values exactly
    ErrorRateCurve curve;
    const long frames = 100'000'000;
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        CurvePoint pt;
        pt.snr_db = snr_db[i];
        pt.frames = frames;
        pt.pc2_errors = std::lround(ps[i] * frames);
        pt.pc1_errors = std::lround(0.1 * ps[i] * frames);
        pt.frame_errors = pt.pc2_errors;
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace

TEST_CASE("uncoded BPSK matches the Gaussian tail") {
    for (double snr_db : {0.0, 2.0, 4.0}) {
        const auto [bits, errors] = run_uncoded_bpsk(snr_db, 200'000, 99);
        const double est = static_cast<double>(errors) / bits;
        const double expected = q_function(std::sqrt(2.0 * SnrValue::from_db(snr_db).linear()));
        const double ci = 3.0 * std::sqrt(expected * (1.0 - expected) / bits);
        INFO("snr ", snr_db, " est ", est, " expected ", expected);
        CHECK(std::abs(est - expected) < ci);
    }
}

TEST_CASE("noise-dominated regime: both classes essentially always fail") {
    const auto code = test_code();
    const auto plan = make_plan(2, LabelingKind::gray);
    SweepOptions opt;
    opt.stop = {20, 300};
    opt.master_seed = 5;
    opt.max_iterations = 30;
    opt.workers = 1;
    const auto curve = run_sweep(code, plan, {-20.0}, opt);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].pp() >= 0.99);
    CHECK(curve.points[0].ps() >= 0.99);
}

TEST_CASE("per-class errors never exceed frame errors and estimates stay in [0,1]") {
    const auto code = test_code();
    const auto plan = make_plan(2, LabelingKind::gray);
    SweepOptions opt;
    opt.stop = {30, 2000};
    opt.master_seed = 6;
    opt.max_iterations = 50;
    opt.workers = 2;
    const auto curve = run_sweep(code, plan, {0.0, 2.0, 4.0}, opt);
    for (const auto& pt : curve.points) {
        CHECK(pt.pc1_errors <= pt.frame_errors);
        CHECK(pt.pc2_errors <= pt.frame_errors);
        CHECK(pt.p() >= 0.0);
        CHECK(pt.p() <= 1.0);
        CHECK(pt.pp() >= 0.0);
        CHECK(pt.pp() <= 1.0);
    }
}

TEST_CASE("sweep counts are identical for 1 and 4 workers") {
    const auto code = test_code();
    const auto plan = make_plan(2, LabelingKind::gray);
    SweepOptions opt;
    opt.stop = {25, 1500};
    opt.master_seed = 7;
    opt.max_iterations = 40;

    opt.workers = 1;
    const auto serial = run_sweep(code, plan, {1.0, 3.0}, opt);
    opt.workers = 4;
    const auto parallel = run_sweep(code, plan, {1.0, 3.0}, opt);

    REQUIRE(serial.points.size() == parallel.points.size());
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(serial.points[i].frames == parallel.points[i].frames);
        CHECK(serial.points[i].frame_errors == parallel.points[i].frame_errors);
        CHECK(serial.points[i].pc1_errors == parallel.points[i].pc1_errors);
        CHECK(serial.points[i].pc2_errors == parallel.points[i].pc2_errors);
    }
}

TEST_CASE("confidence intervals shrink with the frame budget") {
    const auto code = test_code();
    const auto plan = make_plan(2, LabelingKind::gray);
    SweepOptions opt;
    opt.master_seed = 8;
    opt.max_iterations = 40;
    opt.workers = 2;

    // frame-bound budgets so the error floor never triggers the stop
    opt.stop = {1'000'000'000, 400};
    const auto small = run_sweep(code, plan, {1.0}, opt);
    opt.stop = {1'000'000'000, 3200};
    const auto large = run_sweep(code, plan, {1.0}, opt);
    CHECK(large.points[0].frames > small.points[0].frames);
    CHECK(large.points[0].ci_p() < small.points[0].ci_p());
}

TEST_CASE("curve CSV round trip preserves counts and metadata") {
    const auto code = test_code();
    const auto plan = make_plan(2, LabelingKind::gray);
    SweepOptions opt;
    opt.stop = {10, 200};
    opt.master_seed = 9;
    opt.workers = 1;
    auto curve = run_sweep(code, plan, {0.0, 1.0}, opt);
    curve.spec_hash = "00ff00ff00ff00ff";

    std::stringstream buf;
    curve.to_csv(buf);
    const auto text = buf.str();
    CHECK(text.find("snr_db,frames,frame_err,pc1_err,pc2_err,P,Pp,Ps,ci_p,ci_pp,ci_ps") !=
          std::string::npos);
    CHECK(text.find("# spec_hash=00ff00ff00ff00ff") != std::string::npos);

    const auto back = ErrorRateCurve::from_csv(buf);
    REQUIRE(back.points.size() == curve.points.size());
    CHECK(back.master_seed == curve.master_seed);
    CHECK(back.spec_hash == curve.spec_hash);
    for (std::size_t i = 0; i < back.points.size(); ++i) {
        CHECK(back.points[i].frames == curve.points[i].frames);
        CHECK(back.points[i].frame_errors == curve.points[i].frame_errors);
        CHECK(back.points[i].pc1_errors == curve.points[i].pc1_errors);
        CHECK(back.points[i].pc2_errors == curve.points[i].pc2_errors);
    }
}

TEST_CASE("threshold extraction on analytic curves") {
    // P_s(snr_db) = 10^-snr_db crosses delta = 1e-4 at exactly 4 dB
    std::vector<double> grid, ps;
    for (int i = 0; i <= 5; ++i) {
        grid.push_back(i);
        ps.push_back(std::pow(10.0, -static_cast<double>(i)));
    }
    const auto curve = synthetic_ps(grid, ps);
    const auto t = extract_thresholds(curve, 1e-4, 0.1);
    CHECK(t.beta_s_db == doctest::Approx(4.0).epsilon(1e-6));
    // alpha_s: the 0.9 crossing of the same log-linear curve
    CHECK(t.alpha_s_db == doctest::Approx(-std::log10(0.9)).epsilon(1e-6));

    // flat start then a drop: alpha_s interpolates between the brackets
    const auto flat = synthetic_ps({0.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0},
                                   {1.0, 1.0, 0.5, 0.05, 5e-3, 5e-4, 5e-5});
    const auto tf = extract_thresholds(flat, 1e-4, 0.1);
    // hand interpolation between (2, log10 1) and (3, log10 0.5)
    const double expect = 2.0 + (std::log10(0.9) - 0.0) / (std::log10(0.5) - 0.0);
    CHECK(tf.alpha_s_db == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("non-bracketing grids raise the extend-grid error") {
    const auto high = synthetic_ps({0.0, 1.0}, {1.0, 0.5});  // never reaches 1e-4
    CHECK_THROWS_AS(extract_thresholds(high, 1e-4, 0.1), grid_error);
    const auto low = synthetic_ps({0.0, 1.0}, {1e-6, 1e-7});  // starts below delta
    CHECK_THROWS_AS(extract_thresholds(low, 1e-4, 0.1), grid_error);
}

TEST_CASE("fading prediction: step curve reduces to the outage integral") {
    // P(x) = 1 for x < beta, 0 beyond: prediction is 1 - exp(-beta/mean)
    const double beta_db = 5.0;
    std::vector<double> grid, ps;
    for (double x = -10.0; x <= beta_db; x += 0.25) {
        grid.push_back(x);
        ps.push_back(1.0);
    }
    grid.push_back(beta_db + 1e-6);
    ps.push_back(0.0);
    const auto curve = synthetic_ps(grid, ps);

    for (double mean_db : {3.0, 6.0, 10.0}) {
        const auto pred = predict_fading_bler(curve, SnrValue::from_db(mean_db));
        const double expected =
            1.0 - std::exp(-SnrValue::from_db(beta_db).linear() /
                           SnrValue::from_db(mean_db).linear());
        CHECK(pred.ps == doctest::Approx(expected).epsilon(1e-4));
    }
}

TEST_CASE("fading prediction: constant curve predicts itself") {
    std::vector<double> grid, ps;
    for (double x = -5.0; x <= 10.0; x += 1.0) {
        grid.push_back(x);
        ps.push_back(0.37);
    }
    const auto curve = synthetic_ps(grid, ps);
    const auto pred = predict_fading_bler(curve, SnrValue::from_db(4.0));
    CHECK(pred.ps == doctest::Approx(0.37).epsilon(1e-6));
}

TEST_CASE("fading prediction flags thin coverage") {
    const auto curve = synthetic_ps({0.0, 1.0, 2.0}, {1.0, 0.5, 0.25});
    const auto pred = predict_fading_bler(curve, SnrValue::from_db(10.0));
    // the grid tops out at 2 dB but the mean is 10 dB: most mass is beyond
    CHECK(pred.tail_mass > 0.01);
    CHECK(pred.coverage_warning);
}

TEST_CASE("budget_exhausted reflects the stop rule") {
    const auto code = test_code();
    const auto plan = make_plan(2, LabelingKind::gray);
    SweepOptions opt;
    opt.stop = {1000, 10};  // impossible: 1000 errors in at most 10 frames
    opt.master_seed = 10;
    opt.workers = 1;
    const auto curve = run_sweep(code, plan, {5.0}, opt);
    CHECK(curve.points[0].frames == 10);
    CHECK(budget_exhausted(curve, opt.stop));

    opt.stop = {1, 500};
    const auto easy = run_sweep(code, plan, {-10.0}, opt);
    CHECK_FALSE(budget_exhausted(easy, opt.stop));
}
