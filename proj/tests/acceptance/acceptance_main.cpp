// Runs the verification suites at acceptance sizes and prints one PASS/FAIL
// line per criterion. Thresholds below are the criteria's own numbers,
// checked against the measurements recorded in each report.
#include <chrono>
#include <cfloat>
#include <cstdio>
#include <functional>
#include <string>

#include "mslab/harness.hpp"

using namespace mslab;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) detail = why;
    ok = ok && cond;
  }
};

Report run(Suite suite, std::uint64_t seed, int count, int deg, int n) {
  Scenario s;
  s.suite = suite;
  s.seed = seed;
  s.instance_count = count;
  s.degree_cap = deg;
  s.n_cap = n;
  return run_suite(s);
}

double num(const Json& m, const char* key) { return m.at(key).get<double>(); }

std::string where(const Json& rec) { return "instance " + std::to_string(rec.at("index").get<int>()); }

/// Every record must have run to completion (no exception) and carry no failure.
void require_clean(Verdict& v, const Report& r, bool allow_inconclusive = false) {
  for (const auto& rec : r.records) {
    const std::string status = rec.at("status").get<std::string>();
    const bool fine = status == "pass" || (allow_inconclusive && status == "inconclusive");
    std::string why = std::string(to_string(r.scenario.suite)) + " " + where(rec) + " is " + status;
    if (rec.contains("error")) why += ": " + rec["error"]["message"].get<std::string>();
    else if (!rec.at("failures").empty()) why += ": " + rec["failures"][0]["detail"].get<std::string>();
    v.require(fine, why);
  }
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const Report commutant = run(Suite::commutant, 1, 50, 8, 1);
  const Report bicommutant = run(Suite::bicommutant, 2, 50, 8, 3);
  const Report lemma = run(Suite::lemma_embed, 5, 30, 10, 1);
  const Report theta = run(Suite::theta_formula, 6, 30, 6, 3);
  const Report jordan = run(Suite::jordan, 7, 40, 8, 3);
  const Report smirnov = run(Suite::smirnov, 8, 100, 8, 1);
  const Report blowup = run(Suite::blowup, 9, 2, 2, 1);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::pair<std::string, Verdict>> results;

  {  // 1
    Verdict v;
    require_clean(v, commutant);
    v.require(commutant.records.size() == 50, "expected 50 instances");
    for (const auto& rec : commutant.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      const int deg = m["degree"].get<int>();
      v.require(deg >= 1 && deg <= 8, where(rec) + ": degree out of range");
      v.require(m["dimension"].get<int>() == deg, where(rec) + ": commutant dimension != deg u");
      v.require(m["match_failures"].get<int>() == 0 && num(m, "max_match_residual") <= 1e-7,
                where(rec) + ": match residual above 1e-7");
    }
    results.emplace_back("commutant dimension = deg u and calculus match (50 instances)", v);
  }
  {  // 2
    Verdict v;
    require_clean(v, bicommutant);
    v.require(bicommutant.records.size() == 50, "expected 50 instances");
    for (const auto& rec : bicommutant.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      v.require(rec["instance"]["dimension"].get<int>() <= 12 && rec["instance"]["chain"].size() <= 3,
                where(rec) + ": instance exceeds N <= 3, dimension <= 12");
      v.require(m["dimension"].get<int>() == m["minimal_degree"].get<int>(), where(rec) + ": dim != deg m_T");
      v.require(m["match_failures"].get<int>() == 0 && num(m, "max_match_residual") <= 1e-7,
                where(rec) + ": bicommutant element not matched to 1e-7");
      v.require(m["phi_count"].get<int>() == 10 && num(m, "max_phi_span_residual") <= 1e-7 &&
                    num(m, "max_phi_span_residual_abs") <= 1e-7,
                where(rec) + ": phi(T) outside the bicommutant span");
    }
    results.emplace_back("bicommutant dimension = deg m_T, matching, converse (50 instances)", v);
  }
  {  // 3
    Verdict v;
    int pairs = 0, agree = 0, adv = 0, adv_agree = 0;
    for (const auto& rec : bicommutant.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      pairs += m["kinf_pairs"].get<int>();
      agree += m["kinf_agree"].get<int>();
      adv += m["kinf_adversarial"].get<int>();
      adv_agree += m["kinf_adversarial_agree"].get<int>();
    }
    v.require(pairs == 100, std::to_string(pairs) + " pairs evaluated, expected 100");
    v.require(agree == pairs, std::to_string(pairs - agree) + " disagreements");
    v.require(adv == 10 && adv_agree == 10, std::to_string(adv_agree) + "/" + std::to_string(adv) + " adversarial");
    v.detail = v.ok ? std::to_string(agree) + "/" + std::to_string(pairs) + " agree, " + std::to_string(adv_agree) +
                          "/" + std::to_string(adv) + " adversarial"
                    : v.detail;
    results.emplace_back("K-infinity membership agrees with relative primality (100 pairs)", v);
  }
  {  // 4
    Verdict v;
    int checked = 0;
    for (const Report* r : {&bicommutant, &jordan, &theta})
      for (const auto& rec : r->records) {
        const Json& m = rec["measurements"];
        v.require(m.contains("annihilation"), std::string(to_string(r->scenario.suite)) + " " + where(rec) +
                                                  ": not evaluated");
        if (!m.contains("annihilation")) continue;
        ++checked;
        v.require(num(m, "annihilation") <= 1e-9, where(rec) + ": ||m_T(T)|| above 1e-9");
        v.require(m["defect_n"] == m["defect_expected"] && m["is_c0n"].get<bool>(),
                  where(rec) + ": defect_classify disagrees");
      }
    if (v.ok) v.detail = std::to_string(checked) + " C0(N) instances";
    results.emplace_back("annihilation ||m_T(T)|| <= 1e-9 and defect class (N, true)", v);
  }
  {  // 5
    Verdict v;
    require_clean(v, lemma);
    v.require(lemma.records.size() == 30, "expected 30 instances");
    for (const auto& rec : lemma.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      v.require(m["deg_m"].get<int>() + m["deg_q"].get<int>() <= 10, where(rec) + ": total degree above 10");
      v.require(num(m, "isometry_residual") <= 1e-9, where(rec) + ": R*R != I");
      v.require(num(m, "embed_intertwining") <= 1e-9 && num(m, "quotient_intertwining") <= 1e-9,
                where(rec) + ": intertwining above 1e-9");
      v.require(m["rank_Q"] == m["deg_m"], where(rec) + ": Q not surjective");
      v.require(num(m, "kernel_distance") <= 1e-8, where(rec) + ": ker Q != m K2_q");
    }
    bool erratum = false;
    for (const auto& n : lemma.notes)
      erratum = erratum || (n["kind"] == "erratum-candidate" && n["claim"] == "ker Q_j = K²_{q_j}");
    v.require(erratum, "erratum-candidate record missing");
    results.emplace_back("embedding/quotient identities, ker Q = m K2_q, erratum record (30 pairs)", v);
  }
  {  // 6
    Verdict v;
    require_clean(v, theta);
    v.require(theta.records.size() == 30, "expected 30 instances");
    for (const auto& rec : theta.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      v.require(m["size"].get<int>() <= 3 && m["degree"].get<int>() <= 6, where(rec) + ": instance exceeds caps");
    }
    const Json& worked = theta.records.at(0);
    v.require(worked["instance"]["worked_instance"].get<bool>(), "worked instance missing");
    v.require(canonical_dump(worked["measurements"]["formula"]) == R"({"constant":[1,0],"zeros":[[0,0,2]]})",
              "diag(z^2, z) did not give z^2");
    results.emplace_back("minimal function from Theta = rank-sequence minimal function (30 products)", v);
  }
  {  // 7
    Verdict v;
    require_clean(v, jordan, true);
    v.require(jordan.records.size() == 40, "expected 40 instances");
    int found = 0;
    for (const auto& rec : jordan.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      v.require(m["recovered"].get<bool>(), where(rec) + ": Jordan model not recovered");
      found += m["witness"] == "found";
    }
    v.require(found >= 38, "witness found on only " + std::to_string(found) + "/40");
    if (v.ok) v.detail = "witness found on " + std::to_string(found) + "/40";
    results.emplace_back("Jordan models recovered exactly; quasi-similarity witness >= 95%", v);
  }
  {  // 8
    Verdict v;
    require_clean(v, smirnov);
    v.require(smirnov.records.size() == 100, "expected 100 instances");
    for (const auto& rec : smirnov.records) {
      const Json& m = rec["measurements"];
      if (m.empty()) continue;
      v.require(num(m, "unit_residual") <= 1e-8, where(rec) + ": | |a|^2 + |b|^2 - 1 | above 1e-8");
      v.require(num(m, "a_closest_zero_or_pole") > 1.0, where(rec) + ": a vanishes in the closed disk");
      const cplx a0 = complex_from_json(m["a0"]);
      v.require(a0.real() > 0.0 && std::abs(a0.imag()) <= 1e-12 * a0.real(),
                where(rec) + ": a(0) not real positive");
    }
    results.emplace_back("Smirnov normalization on 100 random rational phi", v);
  }
  {  // 9
    Verdict v;
    require_clean(v, blowup);
    const Json expected_eps = Json::array({1e-1, 1e-2, 1e-3, 1e-4});
    for (const auto& rec : blowup.records)
      v.require(rec["instance"]["epsilons"] == expected_eps, where(rec) + ": epsilon decades differ");
    const Json& z = blowup.records.at(0)["measurements"];
    const Json& z2 = blowup.records.at(1)["measurements"];
    v.require(z["degree"] == 1 && z2["degree"] == 2, "expected u = z and u = z^2");
    double worst = 0.0;
    for (const auto& row : z["table"])
      worst = std::max(worst, std::abs(row["norm"].get<double>() * row["epsilon"].get<double>() - 1.0));
    v.require(worst <= 64 * DBL_EPSILON, "u = z: relative error " + std::to_string(worst));
    const Json& t = z2["table"];
    double slowest = INFINITY;
    for (std::size_t i = 1; i < t.size(); ++i)
      slowest = std::min(slowest, t[i]["norm"].get<double>() / t[i - 1]["norm"].get<double>());
    v.require(slowest >= 50.0, "u = z^2: growth " + std::to_string(slowest) + " per decade");
    if (v.ok) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "u = z relative error %.2g; u = z^2 growth >= %.4g per decade", worst, slowest);
      v.detail = buf;
    }
    results.emplace_back("blow-up of 1/b_eps: 1/eps for z, factor >= 50 per decade for z^2", v);
  }
  {  // 10
    Verdict v;
    int spaces = 0;
    double worst = 0.0;
    for (const Report* r : {&commutant, &bicommutant, &lemma, &jordan, &blowup})
      for (const auto& rec : r->records) {
        const Json& m = rec["measurements"];
        v.require(m.contains("oracle_residual"),
                  std::string(to_string(r->scenario.suite)) + " " + where(rec) + ": oracle not evaluated");
        if (!m.contains("oracle_residual")) continue;
        ++spaces;
        worst = std::max(worst, num(m, "oracle_residual"));
      }
    v.require(worst <= 1e-8, "closed form differs from quadrature oracle by " + std::to_string(worst));
    if (v.ok) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%d instances, max Frobenius difference %.2g", spaces, worst);
      v.detail = buf;
    }
    results.emplace_back("closed-form compressed shift = quadrature oracle to 1e-8", v);
  }

  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, v] = results[i];
    failed += !v.ok;
    std::printf("criterion %2zu: %s  %s%s%s\n", i + 1, v.ok ? "PASS" : "FAIL", name.c_str(),
                v.detail.empty() ? "" : " -- ", v.detail.c_str());
  }
  std::printf("acceptance: %zu/%zu criteria passed in %.1f s\n", results.size() - failed, results.size(), seconds);
  return failed == 0 ? 0 : 1;
}
