#include "oracles.hpp"
#include "test_util.hpp"

#include <synrag/evalharness.hpp>
#include <synrag/metrics.hpp>

#include <cmath>
#include <random>

using namespace synrag;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> t) { return {t.begin(), t.end()}; }

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("tokenizer") {
        CHECK(metrics::tokenize_for_metrics("SELECT sourceip") == toks({"select", "sourceip"}));
        CHECK(metrics::tokenize_for_metrics("COUNT(*) AS total") == toks({"count", "(", "*", ")", "as", "total"}));
        CHECK(metrics::tokenize_for_metrics("").empty());
        CHECK(metrics::tokenize_for_metrics("a='b',{c}<d>\"e\"") ==
              toks({"a", "=", "'", "b", "'", ",", "{", "c", "}", "<", "d", ">", "\"", "e", "\""}));
    }

    TEST_CASE("bleu") {
        const auto abcd = toks({"a", "b", "c", "d"});
        CHECK(metrics::bleu(abcd, abcd) == doctest::Approx(1.0));
        CHECK(metrics::bleu(abcd, toks({"w", "x", "y", "z"})) <= 1e-2);
        // Hand count: p1 = 3/4, p2 = 2/3 (ab, bc of ab bc cd), p3 = 1/2 (abc of
        // abc bcd), p4 = eps, BP = 1.
        const double expected = std::pow(0.75 * (2.0 / 3.0) * 0.5 * 1e-9, 0.25);
        CHECK(std::abs(oracle::bleu(abcd, toks({"a", "b", "c", "e"})) - expected) < 1e-12);
        CHECK(std::abs(metrics::bleu(abcd, toks({"a", "b", "c", "e"})) - expected) < 1e-9);
        // Short candidate: brevity penalty exp(1 - 4/2).
        CHECK(metrics::bleu(toks({"a", "b"}), abcd, 2) == doctest::Approx(std::exp(-1.0)));
        CHECK_ERROR_CODE(metrics::bleu({}, abcd), ErrorCode::EmptyCandidate);
        CHECK_ERROR_CODE(metrics::bleu(abcd, {}), ErrorCode::EmptyReference);
        CHECK_ERROR_CODE(metrics::bleu(abcd, abcd, 0), ErrorCode::InvalidArgument);
    }

    TEST_CASE("rouge_l") {
        const auto abcd = toks({"a", "b", "c", "d"});
        CHECK(metrics::rouge_l(abcd, abcd) == doctest::Approx(1.0));
        CHECK(metrics::rouge_l(abcd, toks({"a", "c", "b", "d"})) == doctest::Approx(0.75));
        CHECK(metrics::rouge_l(abcd, toks({"x", "y"})) == 0.0);
        CHECK(metrics::lcs_length(abcd, toks({"a", "c", "b", "d"})) == 3);
        CHECK_ERROR_CODE(metrics::rouge_l({}, abcd), ErrorCode::EmptyCandidate);
    }

    TEST_CASE("metrics agree with oracles on random pairs") {
        std::mt19937 rng(3);
        std::uniform_int_distribution<int> len(1, 25);
        std::uniform_int_distribution<int> sym(0, 5);
        for (int i = 0; i < 100; ++i) {
            std::vector<std::string> a(len(rng)), b(len(rng));
            for (auto& t : a) t = std::string(1, static_cast<char>('a' + sym(rng)));
            for (auto& t : b) t = std::string(1, static_cast<char>('a' + sym(rng)));
            CHECK(std::abs(metrics::rouge_l(a, b) - oracle::rouge_l(a, b)) < 1e-9);
            CHECK(std::abs(metrics::bleu(a, b) - oracle::bleu(a, b)) < 1e-9);
            const double s = metrics::bleu(a, b);
            CHECK((s >= 0.0 && s <= 1.0));
        }
    }
}

TEST_SUITE("evalharness") {
    EvalRecord rec(std::string model, int run, std::string spec, double b, double r) {
        return {std::move(model), run, std::move(spec), Platform::qradar, b, r};
    }

    TEST_CASE("score") {
        EvalInput in{"m", 1, "s", Platform::qradar, "SELECT a FROM events", "SELECT a FROM events"};
        const auto r = score(in);
        CHECK(r.bleu == doctest::Approx(1.0));
        CHECK(r.rouge_l == doctest::Approx(1.0));
        in.candidate_query = "   ";
        CHECK(score(in).bleu == 0.0);
        in.reference_query = "";
        CHECK_ERROR_CODE(score(in), ErrorCode::EmptyReference);
    }

    TEST_CASE("summaries are per-run means then averages") {
        const std::vector<EvalRecord> records = {
            rec("m", 1, "a", 0.1, 0.5), rec("m", 1, "b", 0.3, 0.7), rec("m", 2, "a", 0.2, 0.6),
            rec("m", 2, "b", 0.2, 0.6), rec("n", 1, "a", 0.9, 0.9)};
        const auto s = summarize(records);
        REQUIRE(s.size() == 2);
        CHECK(s[0].model_id == "m");
        CHECK(s[0].run_indices == std::vector<int>{1, 2});
        CHECK(s[0].run_bleu[0] == doctest::Approx(0.2));
        CHECK(s[0].average_bleu == doctest::Approx(0.2));
        CHECK(s[0].average_rouge_l == doctest::Approx(0.6));
        CHECK(s[1].average_bleu == doctest::Approx(0.9));  // single run: average is that run
    }

    TEST_CASE("unbalanced runs") {
        const std::vector<EvalRecord> missing = {rec("m", 1, "a", 0, 0), rec("m", 1, "b", 0, 0),
                                                 rec("m", 2, "a", 0, 0)};
        CHECK_ERROR_CODE(summarize(missing), ErrorCode::UnbalancedRuns);
        const std::vector<EvalRecord> repeated = {rec("m", 1, "a", 0, 0), rec("m", 1, "a", 0, 0)};
        CHECK_ERROR_CODE(summarize(repeated), ErrorCode::UnbalancedRuns);
    }

    TEST_CASE("table rendering") {
        const std::vector<EvalRecord> records = {rec("SynRAG", 1, "x", 0.12344, 0.5), rec("SynRAG", 2, "x", 0.2, 0.25)};
        const auto s = summarize(records);
        const auto md = render_markdown(s);
        CHECK(md.find("| Model | Run 1 BLEU | Run 1 ROUGE-L | Run 2 BLEU | Run 2 ROUGE-L | Average BLEU | "
                      "Average ROUGE-L |") == 0);
        CHECK(md.find("| SynRAG | 0.1234 | 0.5000 | 0.2000 | 0.2500 | 0.1617 | 0.3750 |") != std::string::npos);
        CHECK(render_csv(s) ==
              "model,run1_bleu,run1_rouge_l,run2_bleu,run2_rouge_l,average_bleu,average_rouge_l\n"
              "SynRAG,0.1234,0.5000,0.2000,0.2500,0.1617,0.3750\n");
    }

    TEST_CASE("jsonl round-trip") {
        const auto r = rec("m", 2, "a", 0.25, 0.75);
        const auto back = parse_eval_records(to_json(r) + "\n");
        REQUIRE(back.size() == 1);
        CHECK(back[0] == r);
        CHECK_ERROR_CODE(parse_eval_records("{not json}\n"), ErrorCode::IoError);
    }
}
