#include "ssv/verifier.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ssv {

namespace {

std::uint64_t t_of(std::uint32_t p, std::uint64_t i) {
  return i * (static_cast<std::uint64_t>(p) * p - 1) / 12;
}

std::vector<std::uint32_t> modulus_of(Field f) {
  return std::vector<std::uint32_t>(f->modulus.begin(), f->modulus.begin() + f->m + 1);
}

void add_finding(RunReport& run, std::string kind, std::string detail) {
  run.findings.push_back({std::move(kind), std::move(detail)});
}

// Deterministic per-run sample of Lucas-vs-series checks: prediction by
// digit combinatorics against direct expansion of (1+delta)^t - 1.
bool lucas_sample_ok(std::uint32_t p, std::uint64_t i, std::uint64_t run_t,
                     std::uint32_t margin) {
  std::mt19937_64 rng(p * 1000003ULL + i);
  Field fp = construct_field(p, 1);
  std::uniform_int_distribution<std::uint64_t> tdist(1, 2000);
  for (int trial = 0; trial < 20; ++trial) {
    std::uint64_t t = trial == 0 ? run_t : tdist(rng);
    std::uint64_t order = predicted_valuation(t, p).order;
    std::uint32_t n = static_cast<std::uint32_t>(order + margin);
    std::vector<std::int64_t> coeffs(n, 0);
    coeffs[0] = 0;
    if (n > 1) coeffs[1] = 1 + static_cast<std::int64_t>(rng() % (p - 1));  // unit linear term
    for (std::uint32_t j = 2; j < n; ++j) coeffs[j] = static_cast<std::int64_t>(rng() % p);
    TruncatedSeries delta = TruncatedSeries::from_ints(fp, coeffs);
    if (kummer_oracle(t, p, delta, n) != order) return false;
  }
  return true;
}

bool is_minus_one(const FieldElement& x) {
  return x == FieldElement::from_int(x.field(), -1);
}

}  // namespace

bool VerificationReport::all_pass() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunReport& r) { return r.pass; });
}

bool VerificationReport::any_precision_failure() const {
  return std::any_of(runs.begin(), runs.end(),
                     [](const RunReport& r) { return r.precision_failure; });
}

VerificationReport run_verification(const RunConfig& cfg) {
  // Configuration validation up front; construct_field rejects bad primes.
  for (std::uint32_t p : cfg.primes) construct_field(p, 1);
  for (std::uint64_t i : cfg.indices)
    if (i == 0) throw std::invalid_argument("run_verification: indices must be >= 1");
  if (cfg.routes != RouteSelection::lambda_only) {
    for (std::uint32_t p : cfg.primes)
      for (std::uint64_t i : cfg.indices) {
        std::size_t M = 3 * t_of(p, i) + cfg.precision_margin;
        if (M > cfg.qroute_precision_ceiling)
          throw std::invalid_argument(
              "run_verification: q-route precision " + std::to_string(M) + " for (p=" +
              std::to_string(p) + ", i=" + std::to_string(i) + ") exceeds the ceiling " +
              std::to_string(cfg.qroute_precision_ceiling) +
              "; raise --qroute-ceiling or drop the pair");
      }
  }

  VerificationReport report;
  for (std::uint32_t p : cfg.primes) {
    for (std::uint64_t i : cfg.indices) {
      RunReport run;
      run.p = p;
      run.i = i;
      run.t = t_of(p, i);
      run.nu = nu_p(run.t, p);
      run.predicted_order = predicted_valuation(run.t, p).order;
      run.fp2_modulus = modulus_of(construct_field(p, 2));
      run.fp4_modulus = modulus_of(construct_field(p, 4));

      // Lemma-level checks: the Deuring identity and the point-count oracle.
      HassePolynomial hp = hasse_coefficient_polynomial(p);
      run.deuring_identity_ok = true;  // hasse_coefficient_polynomial throws otherwise
      run.hasse_sign = hp.sign;
      std::vector<SupersingularPoint> points = supersingular_points(p);
      run.roots_oracle_ok = true;
      for (const SupersingularPoint& P : points)
        if (!supersingular_oracle(P.lambda0)) run.roots_oracle_ok = false;
      if (!run.roots_oracle_ok)
        add_finding(run, "oracle_mismatch",
                    "a root of the Deuring polynomial fails the point-count oracle");

      run.lucas_sample_ok = lucas_sample_ok(p, i, run.t, cfg.precision_margin);
      if (!run.lucas_sample_ok)
        add_finding(run, "lucas_kummer_mismatch",
                    "combinatorial prediction disagrees with direct series expansion");

      // Per-point legs data (both routes share it).
      const std::uint32_t contract_precision =
          static_cast<std::uint32_t>(run.predicted_order + cfg.precision_margin);
      bool all_points_exact = true;
      bool all_lemma_ok = true;
      for (const SupersingularPoint& P : points) {
        PointReport pr;
        pr.lambda0 = P.lambda0.coefficients();
        pr.orbit_representative = P.orbit_representative;
        pr.precision = contract_precision;
        pr.delta_valuation = delta_branch_valuation(P);
        LegsMultipliers legs = legs_multipliers(P);
        pr.c = legs.c.coefficients();
        pr.c_dual = legs.c_dual.coefficients();
        pr.c_in_fp = legs.c_in_fp;
        pr.c_times_c_dual_is_one = legs.product_is_one;
        pr.c_nonzero = !legs.c.is_zero();
        pr.legs_branch_ok = legs.status == LegsStatus::ok;
        if (legs.status == LegsStatus::branch_match_failed)
          add_finding(run, "branch_match_failure",
                      "no dual lambda-branch has constant term lambda0 at " +
                          P.lambda0.to_string());
        if (legs.status == LegsStatus::ambiguous_unresolved)
          add_finding(run, "branch_ambiguity_unresolved",
                      "several dual branches match lambda0 and none to first order at " +
                          P.lambda0.to_string());
        if (legs.constant_match_ambiguous && legs.status == LegsStatus::ok)
          add_finding(run, "branch_ambiguity_resolved",
                      "extra automorphisms at " + P.lambda0.to_string() +
                          "; dual branch fixed by first-order matching");
        if (!pr.c_in_fp)
          add_finding(run, "c_outside_prime_field",
                      "legs multiplier c lies outside F_p at " + P.lambda0.to_string());
        if (pr.delta_valuation != 1)
          add_finding(run, "delta_valuation_not_one",
                      "v(rho/rho(0) - 1) = " + std::to_string(pr.delta_valuation) + " at " +
                          P.lambda0.to_string() +
                          (is_minus_one(P.lambda0)
                               ? " (lambda = -1 is fixed by lambda -> 1/lambda and the curve is "
                                 "2-isogenous to itself; the chart order doubles there)"
                               : ""));
        if (!(pr.legs_branch_ok && pr.c_times_c_dual_is_one && pr.c_nonzero) ||
            pr.delta_valuation != 1)
          all_lemma_ok = false;

        if (cfg.routes != RouteSelection::q_only) {
          run.lambda_route_ran = true;
          PointValuation pv = l2_point_valuation(P, run.t, contract_precision);
          pr.rho0_pow_t_is_one = pv.rho0_pow_t_is_one;
          if (!pv.rho0_pow_t_is_one) {
            add_finding(run, "rho0_power_defect",
                        "rho(0)^t != 1 at " + P.lambda0.to_string() +
                            "; reported valuation uses the normalized series");
            all_lemma_ok = false;
          }
          if (pv.valuation.determinate()) {
            pr.valuation = pv.valuation.value();
            pr.valuation_lower_bound = pv.valuation.value();
          } else {
            pr.valuation_lower_bound = pv.valuation.lower_bound();
            run.precision_failure = true;
            // Re-resolve at escalating precision so the report carries the
            // true order even though the contract-precision answer stays
            // indeterminate.
            std::uint32_t n = contract_precision;
            std::optional<std::uint64_t> resolved;
            for (int attempt = 0; attempt < 4 && !resolved; ++attempt) {
              n *= 2;
              PointValuation retry = l2_point_valuation(P, run.t, n);
              if (retry.valuation.determinate()) resolved = retry.valuation.value();
            }
            add_finding(run, "valuation_indeterminate",
                        "lambda-route valuation at " + P.lambda0.to_string() +
                            " is >= " + std::to_string(pr.valuation_lower_bound) +
                            " at the contract precision" +
                            (resolved ? "; resolves to " + std::to_string(*resolved) +
                                            " at precision " + std::to_string(n)
                                      : "; unresolved at 16x the contract precision"));
            if (resolved) pr.valuation = *resolved;  // recorded; still a precision failure
          }
          std::uint64_t got = pr.valuation.value_or(0);
          if (!pr.valuation || got != run.predicted_order) {
            all_points_exact = false;
            if (pr.valuation && got == 2 * run.predicted_order && is_minus_one(P.lambda0))
              add_finding(run, "self_isogenous_overshoot",
                          "order " + std::to_string(got) + " = 2 * " +
                              std::to_string(run.predicted_order) + " at lambda = -1: the "
                              "lambda-line double-covers the level-2 curve with ramification "
                              "there, so the chart valuation doubles the divisor multiplicity");
          }
        }
        run.points.push_back(std::move(pr));
      }

      // (C1)/(C2)-order: Delta^t nonzero mod p and leading exponent t.
      {
        std::size_t M = static_cast<std::size_t>(run.t) + 2;
        QExpansion dt = delta_expansion(p, M).pow(run.t);
        run.c1_pass = !dt.is_zero();
        if (run.c1_pass) {
          run.ordq_delta_t = ord_q(dt);
          run.c2_order_pass = (*run.ordq_delta_t == run.t);
        }
        if (!run.c1_pass)
          add_finding(run, "c1_failure", "Delta^t vanishes mod p");
        else if (!run.c2_order_pass)
          add_finding(run, "c2_order_failure",
                      "ord_q(Delta^t) = " + std::to_string(*run.ordq_delta_t) +
                          " differs from t = " + std::to_string(run.t));
      }

      // q-route: Hasse divisibility of the comparison series.
      bool q_ok = true;
      if (cfg.routes != RouteSelection::lambda_only) {
        std::size_t M = 3 * static_cast<std::size_t>(run.t) + cfg.precision_margin;
        ComparisonSeries cs = l2_comparison_series(p, run.t, M);
        HasseDivisibility hd = max_hasse_divisibility(cs.g, p);
        if (hd.j_max != run.predicted_order) {
          // The global unit is pinned empirically: retry with the flipped
          // sign before reporting a mismatch.
          ComparisonSeries cs2 = l2_comparison_series(p, run.t, M, true);
          HasseDivisibility hd2 = max_hasse_divisibility(cs2.g, p);
          if (hd2.j_max == run.predicted_order) {
            add_finding(run, "epsilon_sign_flipped",
                        "divisibility closes with -epsilon; epsilon = " +
                            std::to_string(cs2.epsilon));
            cs = cs2;
            hd = hd2;
          }
        }
        run.q_route = QRouteReport{hd.j_max, cs.epsilon, hd.sturm_precision};
        q_ok = (hd.j_max == run.predicted_order);
        if (!q_ok)
          add_finding(run, "q_route_mismatch",
                      "j_max = " + std::to_string(hd.j_max) + " differs from the predicted " +
                          std::to_string(run.predicted_order));
      }

      // Route agreement: the divisor-level order seen by the q-route must
      // match the minimum chart order over the points.
      if (run.lambda_route_ran && run.q_route) {
        bool have_all = std::all_of(run.points.begin(), run.points.end(),
                                    [](const PointReport& pr) { return pr.valuation.has_value(); });
        if (have_all) {
          std::uint64_t vmin = ~0ULL;
          for (const PointReport& pr : run.points) vmin = std::min(vmin, *pr.valuation);
          if (vmin != run.q_route->j_max)
            add_finding(run, "route_disagreement",
                        "min lambda-route valuation " + std::to_string(vmin) +
                            " differs from q-route j_max " + std::to_string(run.q_route->j_max));
        }
      }

      run.pass = run.deuring_identity_ok && run.roots_oracle_ok && run.lucas_sample_ok &&
                 all_lemma_ok && run.c1_pass && run.c2_order_pass && q_ok &&
                 (!run.lambda_route_ran || all_points_exact);
      report.runs.push_back(std::move(run));
    }
  }
  return report;
}

std::string emit_report_json(const VerificationReport& report) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema_version"] = 1;
  doc["runs"] = json::array();
  for (const RunReport& run : report.runs) {
    json r;
    r["p"] = run.p;
    r["i"] = run.i;
    r["t"] = run.t;
    r["nu"] = run.nu;
    r["predicted_order"] = run.predicted_order;
    r["fp2_modulus"] = run.fp2_modulus;
    r["fp4_modulus"] = run.fp4_modulus;
    r["points"] = json::array();
    for (const PointReport& pr : run.points) {
      json pj;
      pj["lambda0"] = pr.lambda0;
      pj["modulus"] = run.fp2_modulus;
      pj["orbit_representative"] = pr.orbit_representative;
      if (run.lambda_route_ran) {
        if (pr.valuation)
          pj["valuation"] = *pr.valuation;
        else
          pj["valuation"] = nullptr;
        pj["valuation_lower_bound"] = pr.valuation_lower_bound;
        pj["precision"] = pr.precision;
        pj["rho0_pow_t_is_one"] = pr.rho0_pow_t_is_one;
      }
      pj["delta_valuation"] = pr.delta_valuation;
      pj["c"] = pr.c;
      pj["c_dual"] = pr.c_dual;
      pj["c_modulus"] = run.fp4_modulus;
      pj["c_in_Fp"] = pr.c_in_fp;
      pj["c_times_c_dual_is_one"] = pr.c_times_c_dual_is_one;
      r["points"].push_back(std::move(pj));
    }
    if (run.q_route) {
      json q;
      q["j_max"] = run.q_route->j_max;
      q["epsilon"] = run.q_route->epsilon;
      q["sturm_precision"] = run.q_route->sturm_precision;
      r["q_route"] = std::move(q);
    } else {
      r["q_route"] = nullptr;
    }
    r["c1_pass"] = run.c1_pass;
    if (run.ordq_delta_t)
      r["ordq_delta_t"] = *run.ordq_delta_t;
    else
      r["ordq_delta_t"] = nullptr;
    r["c2_order_pass"] = run.c2_order_pass;
    r["deuring_identity_ok"] = run.deuring_identity_ok;
    r["hasse_sign"] = run.hasse_sign;
    r["roots_oracle_ok"] = run.roots_oracle_ok;
    r["lucas_sample_ok"] = run.lucas_sample_ok;
    r["verdict"] = run.pass ? "PASS" : "FAIL";
    json fs = json::array();
    for (const Finding& f : run.findings) fs.push_back({{"kind", f.kind}, {"detail", f.detail}});
    r["findings"] = std::move(fs);
    doc["runs"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

std::string emit_report_text(const VerificationReport& report) {
  std::ostringstream os;
  for (const RunReport& run : report.runs) {
    os << "== p = " << run.p << ", i = " << run.i << "  (t = " << run.t << ", nu = " << run.nu
       << ", predicted order = " << run.predicted_order << ") ==\n";
    os << "  deuring identity: " << (run.deuring_identity_ok ? "ok" : "FAIL")
       << " (sign " << (run.hasse_sign > 0 ? "+" : "-") << ")"
       << "; point-count oracle: " << (run.roots_oracle_ok ? "ok" : "FAIL")
       << "; lucas sample: " << (run.lucas_sample_ok ? "ok" : "FAIL") << "\n";
    os << "  C1: " << (run.c1_pass ? "ok" : "FAIL") << "; ord_q(Delta^t) = ";
    if (run.ordq_delta_t)
      os << *run.ordq_delta_t;
    else
      os << "indeterminate";
    os << (run.c2_order_pass ? " (= t)" : " (MISMATCH)") << "\n";
    if (run.lambda_route_ran) {
      os << "  lambda-route points:\n";
      for (const PointReport& pr : run.points) {
        os << "    lambda0 = (";
        for (std::size_t k = 0; k < pr.lambda0.size(); ++k)
          os << (k ? "," : "") << pr.lambda0[k];
        os << ")  v = ";
        if (pr.valuation)
          os << *pr.valuation;
        else
          os << ">=" << pr.valuation_lower_bound;
        os << "  v(delta) = " << pr.delta_valuation
           << "  c*c_dual=1: " << (pr.c_times_c_dual_is_one ? "yes" : "NO")
           << "  c in F_p: " << (pr.c_in_fp ? "yes" : "no")
           << "  rho(0)^t=1: " << (pr.rho0_pow_t_is_one ? "yes" : "NO") << "\n";
      }
    }
    if (run.q_route) {
      os << "  q-route: j_max = " << run.q_route->j_max << ", epsilon = " << run.q_route->epsilon
         << ", sturm precision = " << run.q_route->sturm_precision << "\n";
    }
    for (const Finding& f : run.findings)
      os << "  finding[" << f.kind << "]: " << f.detail << "\n";
    os << "  verdict: " << (run.pass ? "PASS" : "FAIL") << "\n\n";
  }
  if (report.runs.empty()) os << "(no runs configured)\n";
  return os.str();
}

}  // namespace ssv
