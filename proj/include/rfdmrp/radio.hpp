#pragma once

// First-order radio energy model and the per-node energy ledger.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfdmrp {

using Bits = std::uint64_t;

/// Radio constants in joules per bit (amplifier terms per m^2 / m^4).
/// Defaults: E_elec 50 nJ/bit for both transmitter and receiver
/// electronics, eps_fs 10 pJ/bit/m^2, eps_mp 0.0013 pJ/bit/m^4,
/// E_DA 5 nJ/bit.
struct RadioParams {
  double eTxElec = 50e-9;
  double eRxElec = 50e-9;
  double epsFs = 10e-12;
  double epsMp = 0.0013e-12;
  double eDa = 5e-9;

  /// Crossover distance between the free-space and multipath branches.
  /// Always derived, never stored.
  double d0() const { return std::sqrt(epsFs / epsMp); }

  /// Same electronics, amplifier coefficients scaled by `factor`.
  RadioParams with_amplifier_scale(double factor) const {
    RadioParams scaled = *this;
    scaled.epsFs *= factor;
    scaled.epsMp *= factor;
    return scaled;
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("radio parameter ") + name +
                                    " must be positive");
    };
    positive(eTxElec, "eTxElec");
    positive(eRxElec, "eRxElec");
    positive(epsFs, "epsFs");
    positive(epsMp, "epsMp");
    positive(eDa, "eDa");
  }
};

inline double crossover_distance(const RadioParams& p) { return p.d0(); }

inline double tx_energy(const RadioParams& p, Bits bits, double d) {
  const double b = static_cast<double>(bits);
  if (d <= p.d0()) return b * (p.eTxElec + p.epsFs * d * d);
  const double d2 = d * d;
  return b * (p.eTxElec + p.epsMp * d2 * d2);
}

inline double rx_energy(const RadioParams& p, Bits bits) {
  return static_cast<double>(bits) * p.eRxElec;
}

/// Aggregation cost over the total bit count handled by the aggregator.
inline double fusion_energy(const RadioParams& p, Bits bits) {
  return static_cast<double>(bits) * p.eDa;
}

struct EnergyTotals {
  double tx = 0.0;
  double rx = 0.0;
  double fusion = 0.0;

  double sum() const { return tx + rx + fusion; }
};

struct ChargeResult {
  double deducted = 0.0;
  bool clamped = false;
  // Set when a charge was requested against a node with nothing left.
  bool deadNodeCharge = false;
};

/// Residual energy RE(i) per node plus network-wide spending totals.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  EnergyLedger(std::size_t nodeCount, double initialEnergy)
      : residual_(nodeCount, initialEnergy),
        initialTotal_(static_cast<double>(nodeCount) * initialEnergy) {
    if (!(initialEnergy >= 0.0))
      throw std::invalid_argument("initial energy must be non-negative");
  }

  std::size_t size() const { return residual_.size(); }
  double residual(std::size_t node) const { return residual_.at(node); }
  std::span<const double> residuals() const { return residual_; }
  const EnergyTotals& totals() const { return totals_; }
  double initial_total() const { return initialTotal_; }
  double consumed() const { return totals_.sum(); }

  double remaining() const {
    double sum = 0.0;
    for (double re : residual_) sum += re;
    return sum;
  }

  /// |sum RE + consumed - n*E0|
  double conservation_error() const {
    return std::abs(remaining() + consumed() - initialTotal_);
  }

  /// RE(node) -= tx + rx + fusion, clamped at zero. When clamped, the
  /// amount actually taken is split across categories in proportion to the
  /// request so totals only ever record energy that left a battery.
  ChargeResult charge(std::size_t node, double tx, double rx, double fusion) {
    if (tx < 0.0 || rx < 0.0 || fusion < 0.0)
      throw std::invalid_argument("energy charges must be non-negative");
    double& re = residual_.at(node);
    const double requested = tx + rx + fusion;
    ChargeResult result;
    if (requested == 0.0) return result;
    if (re <= 0.0) {
      result.deadNodeCharge = true;
      ++deadNodeCharges_;
      return result;
    }
    if (requested <= re) {
      re -= requested;
      totals_.tx += tx;
      totals_.rx += rx;
      totals_.fusion += fusion;
      result.deducted = requested;
      return result;
    }
    const double available = re;
    const double scale = available / requested;
    re = 0.0;
    totals_.tx += tx * scale;
    totals_.rx += rx * scale;
    totals_.fusion += fusion * scale;
    result.deducted = available;
    result.clamped = true;
    return result;
  }

  std::size_t dead_node_charges() const { return deadNodeCharges_; }

 private:
  std::vector<double> residual_;
  EnergyTotals totals_;
  double initialTotal_ = 0.0;
  std::size_t deadNodeCharges_ = 0;
};

}  // namespace rfdmrp
