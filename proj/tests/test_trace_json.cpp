#include <gtest/gtest.h>

#include <sstream>

#include "harness/bench_suites.hpp"
#include "thirdopt/trace_json.hpp"

using namespace thirdopt;

namespace {

Trace confined_run(std::uint64_t seed) {
  Vector x0 = Vector::Zero(2);
  return optimize(corpus::monkey_saddle_confined(), x0, bench::confined_saddle_config(seed, 100));
}

std::string dump(const Trace& tr) {
  std::ostringstream out;
  write_trace(out, tr);
  return out.str();
}

}  // namespace

TEST(TraceJson, RequiredFieldsInOrder) {
  const std::string text = dump(confined_run(0));
  std::istringstream in(text);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  const auto j = nlohmann::ordered_json::parse(line);
  const std::vector<std::string> leading = {"iter", "phase", "f", "grad_norm", "mu", "c_q", "subspace_dim",
                                            "step_norm", "flags"};
  auto it = j.begin();
  for (const auto& key : leading) {
    ASSERT_NE(it, j.end());
    EXPECT_EQ(it.key(), key);
    ++it;
  }
}

TEST(TraceJson, RoundTripIsIdentity) {
  const std::string text = dump(confined_run(0));
  std::istringstream in(text);
  Trace back;
  back.records = read_trace_records(in);
  EXPECT_EQ(dump(back), text);
}

TEST(TraceJson, ByteIdenticalForSameSeed) {
  EXPECT_EQ(dump(confined_run(4)), dump(confined_run(4)));
}

TEST(TraceJson, PhasesAndNullThirdFlag) {
  const Trace tr = confined_run(0);
  const std::string text = dump(tr);
  EXPECT_NE(text.find("\"phase\":\"third\""), std::string::npos);
  EXPECT_NE(text.find("\"phase\":\"terminal\""), std::string::npos);
  EXPECT_NE(text.find("\"third_decrease\":null"), std::string::npos);
}

TEST(TraceJson, MalformedLinesRejected) {
  std::istringstream bad("{\"iter\": 0}\n");
  EXPECT_THROW(read_trace_records(bad), InvalidArgument);
  std::istringstream garbage("not json\n");
  EXPECT_THROW(read_trace_records(garbage), InvalidArgument);
}

TEST(BenchCsv, DeterministicAndUnknownSuite) {
  EXPECT_EQ(bench::to_csv(bench::run_suite("subproblem", 3)), bench::to_csv(bench::run_suite("subproblem", 3)));
  EXPECT_THROW(bench::run_suite("nope", 0), InvalidArgument);
}
