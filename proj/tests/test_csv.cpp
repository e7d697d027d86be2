#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "fpemd/csv.hpp"
#include "fpemd/experiments.hpp"

using namespace fpemd;

TEST(Csv, SignalRoundTripIsExact) {
  const auto s = add_white_noise(synth_cosine_sum({{1, 3, 0.1}}, 0.2, 100, 1), 0.3, 4);
  std::stringstream io;
  csv::write_signal(io, s);
  const auto back = csv::read_signal(io);
  EXPECT_EQ(back.values(), s.values());
  EXPECT_NEAR(back.sample_rate(), 100.0, 1e-9);
}

TEST(Csv, StartTimeAndCrLf) {
  std::istringstream in("t,value\r\n2.0,1\r\n2.5,2\r\n3.0,3\r\n\r\n");
  const auto s = csv::read_signal(in);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s.start_time(), 2.0);
  EXPECT_DOUBLE_EQ(s.sample_rate(), 2.0);
}

TEST(Csv, ParseErrors) {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(csv::read_signal(in), parse_error) << text;
  };
  fails("");
  fails("time,value\n0,1\n1,2\n");
  fails("t,value\n0,1\n");
  fails("t,value\n0,1\n1,abc\n");
  fails("t,value\n0,1\n1,2,3\n");
  fails("t,value\n0,1\n1,2\n3,4\n");  // non-uniform spacing
  fails("t,value\n1,1\n0,2\n");        // decreasing time
  fails("t,value\n0,1\n1,nan\n");
}

TEST(Csv, DecompositionRoundTrip) {
  const auto s = synth_cosine_sum({{1, 1, 0}, {1, 0.3, 0}}, 0, 25, 40);
  const auto d = run_method(Method::forward_pde, s, MethodConfig{});
  std::stringstream io;
  csv::write_decomposition(io, d);
  std::string header;
  std::getline(std::istringstream(io.str()) >> std::ws, header);
  EXPECT_EQ(header.rfind("t,imf1", 0), 0u);
  const auto back = csv::read_decomposition(io);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) EXPECT_EQ(back.imfs[k].values(), d.imfs[k].values());
  EXPECT_EQ(back.residual.values(), d.residual.values());
}

TEST(Csv, DecompositionHeaderChecked) {
  std::istringstream in("t,imf2,residual\n0,1,1\n1,1,1\n");
  EXPECT_THROW(csv::read_decomposition(in), parse_error);
}

TEST(Csv, NumberFormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789})
    EXPECT_EQ(std::stod(csv::format_number(v)), v);
}
