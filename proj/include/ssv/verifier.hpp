#pragma once

// Orchestration and reporting: run every check for the configured (p, i)
// pairs, merge the two routes, and emit deterministic machine- and
// human-readable reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssv/legendre.hpp"
#include "ssv/qforms.hpp"

namespace ssv {

enum class RouteSelection { lambda_only, q_only, both };
enum class ReportFormat { json, text };

struct RunConfig {
  std::vector<std::uint32_t> primes;   // each prime >= 5
  std::vector<std::uint64_t> indices;  // values of i, each >= 1
  RouteSelection routes = RouteSelection::both;
  std::uint32_t precision_margin = 2;        // N = p^nu + margin, M = 3t + margin
  std::size_t qroute_precision_ceiling = 2000;
};

// A mismatch or anomaly observed during a run.  Failures are data: nothing
// is silently reconciled.
struct Finding {
  std::string kind;
  std::string detail;
};

struct PointReport {
  std::vector<std::uint32_t> lambda0;  // coefficients over F_{p^2}
  bool orbit_representative = false;
  // lambda-route valuation at the contract precision; nullopt when the
  // valuation is indeterminate there (a precision failure, reported).
  std::optional<std::uint64_t> valuation;
  std::uint64_t valuation_lower_bound = 0;
  std::uint32_t precision = 0;
  std::uint32_t delta_valuation = 0;  // v(rho/rho(0) - 1)
  bool rho0_pow_t_is_one = false;
  std::vector<std::uint32_t> c;       // legs multipliers over F_{p^4}
  std::vector<std::uint32_t> c_dual;
  bool c_in_fp = false;
  bool c_times_c_dual_is_one = false;
  bool c_nonzero = false;
  bool legs_branch_ok = false;  // branch matching succeeded
};

struct QRouteReport {
  std::uint64_t j_max = 0;
  std::uint32_t epsilon = 0;
  std::size_t sturm_precision = 0;
};

struct RunReport {
  std::uint32_t p = 0;
  std::uint64_t i = 0;
  std::uint64_t t = 0;
  std::uint32_t nu = 0;
  std::uint64_t predicted_order = 0;
  std::vector<std::uint32_t> fp2_modulus;
  std::vector<std::uint32_t> fp4_modulus;
  bool lambda_route_ran = false;
  std::vector<PointReport> points;
  std::optional<QRouteReport> q_route;
  bool deuring_identity_ok = false;
  int hasse_sign = 0;
  bool roots_oracle_ok = false;
  bool lucas_sample_ok = false;
  bool c1_pass = false;                        // Delta^t mod p != 0
  std::optional<std::uint64_t> ordq_delta_t;   // absent when C1 fails
  bool c2_order_pass = false;                  // ord_q(Delta^t) == t
  bool pass = false;
  bool precision_failure = false;
  std::vector<Finding> findings;
};

struct VerificationReport {
  std::vector<RunReport> runs;
  bool all_pass() const;
  bool any_precision_failure() const;
};

// Validates the configuration (primality, i >= 1, the q-route precision
// ceiling) and throws std::invalid_argument on violations; individual check
// failures never throw, they are recorded in the report.
VerificationReport run_verification(const RunConfig& cfg);

// Deterministic serializations: identical configs produce byte-identical
// documents.
std::string emit_report_json(const VerificationReport& report);
std::string emit_report_text(const VerificationReport& report);

}  // namespace ssv
