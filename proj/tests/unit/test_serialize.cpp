#include <doctest.h>

#include <sstream>

#include "json.hpp"
#include "pnrmzi/serialize.hpp"

using namespace pnrmzi;
using nlohmann::json;

TEST_SUITE("serialize") {
  TEST_CASE("numbers carry 12 significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(114.77225575051661) == "114.772255751");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1e-40) == "1e-40");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(round12(2.0 / 3.0) == 0.666666666667);
  }

  TEST_CASE("Fisher report round trip") {
    const LightSource src = LightSource::from_split(10.0, 6.0);
    const auto amps = build_amplitude_table(src);
    FisherOptions opt;
    opt.cfi_max_n = 5;
    const auto rep = total_fisher_exact(amps, src, Threshold::finite(20), opt);
    const std::string text = to_json(rep);
    const json j = json::parse(text);
    for (const char* key : {"n_bar", "n_bar_a", "n_bar_b", "n_res", "per_n", "total_exact",
                            "total_ideal", "total_approx"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["n_res"] == 20);
    const auto back = fisher_report_from_json(text);
    CHECK(back.total_exact == round12(rep.total_exact));
    CHECK(back.per_n.size() == rep.per_n.size());
    CHECK(to_json(back) == text);

    const auto inf_rep = total_fisher_exact(amps, src, Threshold::infinite(), opt);
    CHECK(json::parse(to_json(inf_rep))["n_res"] == "inf");
    CHECK(fisher_report_from_json(to_json(inf_rep)).n_res.is_infinite());

    CHECK_THROWS_AS(fisher_report_from_json("{\"n_bar\": 1}"), MalformedInput);
    CHECK_THROWS_AS(fisher_report_from_json("not json"), MalformedInput);
  }

  TEST_CASE("undefined approximation serializes as null") {
    const LightSource src = LightSource::from_split(20.0, 16.0);
    const auto rep = total_fisher_exact(build_amplitude_table(src), src, Threshold::finite(5));
    CHECK_FALSE(rep.total_approx.has_value());
    CHECK(json::parse(to_json(rep))["total_approx"].is_null());
  }

  TEST_CASE("fit and estimation JSON fields") {
    PowerLawFit fit{0.52, 1.08, 0.01, 1.0, 200.0};
    const json jf = json::parse(to_json(fit));
    for (const char* key : {"c", "p", "rms", "n_min", "n_max"}) CHECK(jf.contains(key));

    EstimationRun run;
    run.true_phi = 0.6;
    run.trials = 100;
    run.repetitions = 2;
    run.estimates = {0.59, 0.61};
    run.empirical_variance = 2e-4;
    run.crb = 1e-4;
    const json je = json::parse(to_json(run));
    for (const char* key : {"true_phi", "trials", "repetitions", "empirical_variance", "crb", "ratio"}) {
      CHECK(je.contains(key));
    }
    CHECK(je["ratio"].get<double>() == doctest::Approx(2.0));
  }

  TEST_CASE("CSV writers emit headers") {
    std::ostringstream out;
    std::vector<ScalingRow> rows = {{10.0, Threshold::infinite(), 5.0, 114.7, 115.0}};
    write_scaling_csv(out, rows);
    CHECK(out.str() == "n_bar,n_res,alpha2_opt,fq_opt,fq_ideal\n10,inf,5,114.7,115\n");

    std::ostringstream amp;
    const std::vector<LogSigned> vals = {LogSigned::one(), LogSigned::zero(), LogSigned::from_value(-0.5)};
    write_amplitudes_csv(amp, vals);
    CHECK(amp.str().rfind("index,log_magnitude,sign\n", 0) == 0);
    CHECK(amp.str().find("1,-inf,0") != std::string::npos);
  }

  TEST_CASE("CSV reader") {
    std::istringstream ok("# comment\nn_bar,fq_opt\n1,2\n3, 4\n");
    const auto t = read_csv(ok);
    CHECK(t.header.size() == 2);
    CHECK(t.numeric_column("fq_opt") == std::vector<double>{2.0, 4.0});
    CHECK_THROWS_AS(t.numeric_column("missing"), MalformedInput);

    std::istringstream ragged("a,b\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(ragged), MalformedInput);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), MalformedInput);
    std::istringstream bad("a,b\n1,x\n");
    CHECK_THROWS_AS(read_csv(bad).numeric_column("b"), MalformedInput);
  }
}
