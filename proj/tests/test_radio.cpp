#include <gtest/gtest.h>

#include <cmath>

#include "rfdmrp/radio.hpp"

using namespace rfdmrp;

namespace {

constexpr Bits kPacket = 4096 * 8;

// Expected values below are hand evaluations of the first-order model with
// the reference constants (E_elec 50 nJ/bit, eps_fs 10 pJ/bit/m^2,
// eps_mp 0.0013 pJ/bit/m^4, E_DA 5 nJ/bit).
constexpr double kTx20m = 1.769472e-3;   // 32768 * (50e-9 + 10e-12 * 400)
constexpr double kTx100m = 5.89824e-3;   // 32768 * (50e-9 + 0.0013e-12 * 1e8)
constexpr double kRx = 1.6384e-3;        // 32768 * 50e-9
constexpr double kFusion = 1.6384e-4;    // 32768 * 5e-9

void expect_rel(double actual, double expected, double rel = 1e-12) {
  EXPECT_NEAR(actual, expected, std::abs(expected) * rel) << "actual " << actual;
}

}  // namespace

TEST(Radio, TransmitFreeSpaceAndMultipath) {
  const RadioParams p;
  expect_rel(tx_energy(p, kPacket, 20.0), kTx20m);
  expect_rel(tx_energy(p, kPacket, 100.0), kTx100m);
  EXPECT_EQ(tx_energy(p, 0, 37.0), 0.0);
  EXPECT_EQ(tx_energy(p, 0, 500.0), 0.0);
}

TEST(Radio, CrossoverDistance) {
  expect_rel(crossover_distance(RadioParams{}), 87.70580193070292, 1e-12);
  RadioParams unit;
  unit.epsFs = unit.epsMp = 3e-12;
  EXPECT_DOUBLE_EQ(crossover_distance(unit), 1.0);
  RadioParams square;
  square.epsMp = 1e-12;
  square.epsFs = 4e-12;
  EXPECT_DOUBLE_EQ(crossover_distance(square), 2.0);
}

TEST(Radio, ReceiveAndFusion) {
  const RadioParams p;
  expect_rel(rx_energy(p, kPacket), kRx);
  EXPECT_EQ(rx_energy(p, 0), 0.0);
  expect_rel(rx_energy(p, 1), 5e-8);
  expect_rel(fusion_energy(p, kPacket), kFusion);
  EXPECT_EQ(fusion_energy(p, 0), 0.0);
  expect_rel(fusion_energy(p, 2 * kPacket), 3.2768e-4);
}

TEST(Radio, ContinuousAtCrossover) {
  const RadioParams p;
  const double d0 = p.d0();
  const double below = tx_energy(p, kPacket, std::nextafter(d0, 0.0));
  const double above = tx_energy(p, kPacket, std::nextafter(d0, 1e9));
  EXPECT_NEAR(below, above, 1e-15 * below + 1e-18);
  // Both branches agree at d0 itself.
  const double fs = kPacket * (p.eTxElec + p.epsFs * d0 * d0);
  const double mp = kPacket * (p.eTxElec + p.epsMp * d0 * d0 * d0 * d0);
  EXPECT_NEAR(fs, mp, 1e-15 * fs);
}

TEST(Radio, LinearInBitsAndMonotoneInDistance) {
  const RadioParams p;
  for (Bits b : {Bits{1}, Bits{1000}, kPacket, Bits{123457}}) {
    for (double d : {0.0, 5.0, 20.0, 87.0, 90.0, 150.0}) EXPECT_EQ(tx_energy(p, 2 * b, d), 2 * tx_energy(p, b, d));
    EXPECT_EQ(rx_energy(p, 2 * b), 2 * rx_energy(p, b));
    EXPECT_EQ(fusion_energy(p, 2 * b), 2 * fusion_energy(p, b));
  }
  double previous = 0.0;
  for (double d = 0.0; d <= 200.0; d += 0.25) {
    const double e = tx_energy(p, kPacket, d);
    EXPECT_GE(e, previous) << "at d=" << d;
    previous = e;
  }
}

TEST(Radio, AmplifierScaleHalvesAmplifierTerm) {
  const RadioParams p;
  const RadioParams half = p.with_amplifier_scale(0.5);
  for (double d : {10.0, 30.0, 95.0}) {
    const double elec = kPacket * p.eTxElec;
    const double full = tx_energy(p, kPacket, d) - elec;
    const double reduced = tx_energy(half, kPacket, d) - elec;
    EXPECT_NEAR(reduced, 0.5 * full, 1e-15);
  }
  EXPECT_DOUBLE_EQ(half.d0(), p.d0());
}

TEST(Radio, RejectsNonPositiveConstants) {
  RadioParams p;
  p.epsMp = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(RadioParams{}.validate());
}

TEST(EnergyLedger, ChargeSubtracts) {
  EnergyLedger ledger(3, 0.5);
  ledger.charge(1, kTx20m, 0.0, 0.0);
  EXPECT_NEAR(ledger.residual(1), 0.498230528, 1e-15);
  EXPECT_NEAR(ledger.totals().tx, kTx20m, 1e-18);
  EXPECT_EQ(ledger.residual(0), 0.5);
}

TEST(EnergyLedger, ZeroChargeIsIdentity) {
  EnergyLedger ledger(1, 0.5);
  const auto r = ledger.charge(0, 0.0, 0.0, 0.0);
  EXPECT_EQ(ledger.residual(0), 0.5);
  EXPECT_EQ(r.deducted, 0.0);
  EXPECT_EQ(ledger.consumed(), 0.0);
}

TEST(EnergyLedger, ClampsAtZeroAndRecordsOnlyWhatWasAvailable) {
  EnergyLedger ledger(1, 1e-4);
  const auto r = ledger.charge(0, 2e-4, 0.0, 0.0);
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(ledger.residual(0), 0.0);
  EXPECT_NEAR(ledger.consumed(), 1e-4, 1e-20);
  EXPECT_NEAR(r.deducted, 1e-4, 1e-20);
}

TEST(EnergyLedger, ChargingEmptyNodeIsDiagnosedNoOp) {
  EnergyLedger ledger(1, 1e-4);
  ledger.charge(0, 1.0, 0.0, 0.0);
  const double consumed = ledger.consumed();
  const auto r = ledger.charge(0, 1e-3, 1e-3, 0.0);
  EXPECT_TRUE(r.deadNodeCharge);
  EXPECT_EQ(r.deducted, 0.0);
  EXPECT_EQ(ledger.consumed(), consumed);
  EXPECT_EQ(ledger.dead_node_charges(), 1u);
}

TEST(EnergyLedger, ConservationUnderRandomCharges) {
  EnergyLedger ledger(20, 0.5);
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  double lastConsumed = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const std::size_t node = static_cast<std::size_t>(next() * 20) % 20;
    ledger.charge(node, next() * 5e-3, next() * 2e-3, next() * 1e-3);
    EXPECT_LE(ledger.conservation_error(), 1e-9);
    EXPECT_GE(ledger.consumed(), lastConsumed);
    lastConsumed = ledger.consumed();
    for (double re : ledger.residuals()) ASSERT_GE(re, 0.0);
  }
}

TEST(EnergyLedger, RejectsNegativeCharge) {
  EnergyLedger ledger(1, 0.5);
  EXPECT_THROW(ledger.charge(0, -1.0, 0.0, 0.0), std::invalid_argument);
}
