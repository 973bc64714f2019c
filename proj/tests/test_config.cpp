#include <gtest/gtest.h>

#include <sstream>

#include "rfdmrp/config.hpp"
#include "rfdmrp/csv.hpp"

using namespace rfdmrp;
using namespace rfdmrp::config;

TEST(Config, DefaultsMatchReferenceSetup) {
  const SimConfig c = load_config("");
  EXPECT_EQ(c.nodeCount, 100u);
  EXPECT_EQ(c.fieldWidth, 100.0);
  EXPECT_EQ(c.bsPosition, (Point{50.0, 50.0}));
  EXPECT_EQ(c.initialEnergy, 0.5);
  EXPECT_EQ(c.packetBits, 32768u);
  EXPECT_EQ(c.transmissionRange, 20.0);
  EXPECT_EQ(c.radio.eTxElec, 50e-9);
  EXPECT_EQ(c.radio.eRxElec, 50e-9);
  EXPECT_EQ(c.radio.epsFs, 10e-12);
  EXPECT_EQ(c.radio.epsMp, 0.0013e-12);
  EXPECT_EQ(c.radio.eDa, 5e-9);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_NEAR(c.energy_threshold(), 0.1, 1e-15);
  EXPECT_EQ(c.leach.pDesired, 0.05);
}

TEST(Config, FileThenOverrides) {
  std::istringstream in(
      "# sample\n"
      "nodeCount = 50   # trailing comment\n"
      "\n"
      "protocol = leach\n"
      "packetBytes = 2000\n"
      "bsX = 0\n");
  const SimConfig c = parse_config(in, "sample.cfg", {"nodeCount=200", "gamma = 0.25"});
  EXPECT_EQ(c.nodeCount, 200u);
  EXPECT_EQ(c.gamma, 0.25);
  EXPECT_EQ(c.protocol, Protocol::LEACH);
  EXPECT_EQ(c.packetBits, 16000u);
  EXPECT_EQ(c.bsPosition.x, 0.0);
}

TEST(Config, OutOfRangeGammaRejected) {
  try {
    load_config("", {"gamma=1.5"});
    FAIL() << "expected rejection";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
  }
}

TEST(Config, UnknownKeyNamesLocation) {
  std::istringstream in("nodeCount = 10\nnodeCuont = 20\n");
  try {
    parse_config(in, "x.cfg");
    FAIL() << "expected rejection";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("x.cfg:2"), std::string::npos);
    EXPECT_NE(what.find("nodeCuont"), std::string::npos);
  }
}

TEST(Config, MalformedInputsRejected) {
  std::istringstream noEquals("nodeCount 10\n");
  EXPECT_THROW(parse_config(noEquals, "a"), ConfigError);
  std::istringstream badNumber("gamma = half\n");
  EXPECT_THROW(parse_config(badNumber, "b"), ConfigError);
  std::istringstream negative("nodeCount = -4\n");
  EXPECT_THROW(parse_config(negative, "c"), ConfigError);
  std::istringstream protocol("protocol = PEGASIS\n");
  EXPECT_THROW(parse_config(protocol, "d"), ConfigError);
  EXPECT_THROW(load_config("", {"seed"}), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/rfdmrp.cfg"), ConfigError);
}

TEST(Config, ProtocolNames) {
  EXPECT_EQ(parse_protocol("RFDMRP"), Protocol::RFDMRP);
  EXPECT_EQ(parse_protocol("modleach"), Protocol::MODLEACH);
  EXPECT_EQ(parse_protocol("MOD_LEACH"), Protocol::MODLEACH);
  EXPECT_FALSE(parse_protocol("flood").has_value());
}

TEST(Config, RiverFormationOverrides) {
  const auto p = rfd_params_from({"erosionRate=0.2", "convergenceWindow=5"});
  EXPECT_EQ(p.erosionRate, 0.2);
  EXPECT_EQ(p.convergenceWindow, 5);
  EXPECT_EQ(p.maxIterations, 1000);
  EXPECT_THROW(rfd_params_from({"erosionRate=0"}), ConfigError);
  EXPECT_THROW(rfd_params_from({"gamma=0.5"}), ConfigError);
}

TEST(Csv, RealFormatting) {
  EXPECT_EQ(csv::format_real(50.0), "50.0");
  EXPECT_EQ(csv::format_real(0.1), "0.1");
  EXPECT_EQ(csv::format_real(49.98231), "49.98231");
  EXPECT_EQ(csv::format_real(0.0), "0.0");
  EXPECT_EQ(csv::format_param(100.0), "100");
  EXPECT_EQ(csv::format_param(0.25), "0.25");
}

TEST(Csv, RoundRowLayout) {
  RoundMetrics m;
  m.protocol = Protocol::LEACH;
  m.seed = 3;
  m.round = 0;
  m.alive = 100;
  m.remainingEnergy = 50.0;
  std::ostringstream out;
  csv::write_round_header(out);
  csv::write_round_rows(out, std::vector<RoundMetrics>{m});
  EXPECT_EQ(out.str(),
            "protocol,seed,round,dead,alive,remaining_energy_j,packets_to_bs,direct_to_bs_hop0,"
            "direct_to_bs_fallback\n"
            "LEACH,3,0,0,100,50.0,0,0,0\n");
}
