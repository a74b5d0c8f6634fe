#include "mslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace mslab {

namespace {

constexpr int kMaxModelDimension = 12;
constexpr double kZeroRadius = 0.95;
constexpr double kMinSeparation = 0.05;
constexpr double kRepeatProbability = 0.25;
constexpr int kPhiPerInstance = 10;
constexpr int kChiPairsPerInstance = 2;
constexpr int kAdversarialInstances = 10;
constexpr double kAdversarialRadius = 0.8;
constexpr double kAdversarialFar = 1e-6;   // 10 x tol_pair: relatively prime
constexpr double kAdversarialNear = 1e-9;  // well inside tol_pair: shared zero
constexpr int kBoundarySamples = 512;
constexpr int kMaxTheta = 6;
constexpr int kMaxLemmaTotal = 10;
constexpr double kBlowupGrowth = 50.0;
constexpr int kBlowupDecades = 4;
constexpr int kBlowupRankDigits = 8;
constexpr double kMachineRelative = 64 * DBL_EPSILON;

const std::vector<std::string> kSuites{"commutant", "bicommutant", "smirnov",      "lemma-embed",
                                       "jordan",    "theta-formula", "blowup"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// Per-instance checks: measurements plus named failures.
struct Outcome {
  Json measurements = Json::object();
  Json failures = Json::array();
  bool inconclusive = false;

  void expect(bool ok, const std::string& check, const std::string& detail) {
    if (!ok) failures.push_back({{"check", check}, {"detail", detail}});
  }
  void bound(const std::string& key, double value, double limit) {
    measurements[key] = value;
    expect(value <= limit, key, fmt(value) + " exceeds " + fmt(limit));
  }
  void track_max(const std::string& key, double value) {
    const double prev = measurements.contains(key) ? measurements[key].get<double>() : 0.0;
    measurements[key] = std::max(prev, value);
  }
};

// ---------------------------------------------------------------- generation

cplx fresh_zero(Rng& rng, const std::vector<Zero>& taken, double radius = kZeroRadius) {
  cplx a = rng.in_disk(radius);
  for (int attempt = 0; attempt < 200; ++attempt) {
    bool far = true;
    for (const auto& z : taken) far = far && std::abs(z.location - a) > kMinSeparation;
    if (far) return a;
    a = rng.in_disk(radius);
  }
  return a;
}

InnerFunction random_inner(Rng& rng, int degree) {
  std::vector<Zero> zeros;
  for (int k = 0; k < degree; ++k) {
    if (!zeros.empty() && rng.uniform() < kRepeatProbability) {
      zeros[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(zeros.size()) - 1))].multiplicity++;
      continue;
    }
    zeros.push_back({fresh_zero(rng, zeros), 1});
  }
  return InnerFunction(std::move(zeros));
}

/// Random inner divisor of u with the given degree.
InnerFunction random_divisor(Rng& rng, const InnerFunction& u, int degree) {
  std::vector<cplx> pool = u.expanded_zeros();
  for (int i = static_cast<int>(pool.size()) - 1; i > 0; --i)
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(rng.uniform_int(0, i))]);
  std::vector<Zero> zeros;
  for (int k = 0; k < degree; ++k) {
    const cplx a = pool[static_cast<std::size_t>(k)];
    auto it = std::find_if(zeros.begin(), zeros.end(), [&](const Zero& z) { return z.location == a; });
    if (it != zeros.end()) it->multiplicity++;
    else zeros.push_back({a, 1});
  }
  return InnerFunction(std::move(zeros));
}

/// u_N | ... | u_1 with deg u_1 <= degree_cap and total degree <= 12.
std::vector<InnerFunction> random_chain(Rng& rng, int n, int degree_cap) {
  const int first_cap = std::min(degree_cap, kMaxModelDimension - (n - 1));
  std::vector<InnerFunction> chain{random_inner(rng, rng.uniform_int(1, first_cap))};
  int total = chain.front().degree();
  for (int i = 1; i < n; ++i) {
    const int budget = kMaxModelDimension - total - (n - 1 - i);
    const int d = rng.uniform_int(1, std::min(chain.back().degree(), budget));
    chain.push_back(random_divisor(rng, chain.back(), d));
    total += d;
  }
  return chain;
}

Polynomial random_outer(Rng& rng, int max_roots) {
  std::vector<cplx> roots;
  const int k = rng.uniform_int(0, max_roots);
  for (int i = 0; i < k; ++i) roots.push_back(std::polar(rng.uniform(1.2, 3.0), rng.uniform(0.0, 2.0 * M_PI)));
  return Polynomial::from_roots(roots, rng.complex_normal());
}

/// Root away from the unit circle (|r| < 0.9 or 1.1 < |r| < 2.5).
cplx off_circle_root(Rng& rng) {
  const double r = rng.uniform() < 0.5 ? rng.uniform(0.0, 0.9) : rng.uniform(1.1, 2.5);
  return std::polar(r, rng.uniform(0.0, 2.0 * M_PI));
}

InnerFunction chain_product(const std::vector<InnerFunction>& chain, const Tolerances& tol) {
  InnerFunction out;
  for (const auto& u : chain) out = inner_mul(out, u, tol);
  return out;
}

Json chain_json(const std::vector<InnerFunction>& chain) {
  Json out = Json::array();
  for (const auto& u : chain) out.push_back(to_json(u));
  return out;
}

std::vector<InnerFunction> chain_from(const Json& j, const Tolerances& tol) {
  std::vector<InnerFunction> out;
  for (const auto& u : j) out.push_back(inner_from_json(u, tol));
  return out;
}

Json seed_json(Rng& rng) { return static_cast<std::uint64_t>(rng.uniform() * 9007199254740992.0); }

Json gen_commutant(const Scenario& s, Rng& rng, int) {
  return {{"u", to_json(random_inner(rng, rng.uniform_int(1, s.degree_cap)))}};
}

Json gen_bicommutant(const Scenario& s, Rng& rng, int index) {
  const bool adversarial = index < kAdversarialInstances;
  std::vector<InnerFunction> chain;
  cplx target{};
  for (;;) {
    chain = random_chain(rng, rng.uniform_int(1, s.n_cap), s.degree_cap);
    if (!adversarial) break;
    // The far-side adversarial pair needs a simple zero of m_T so that the
    // separation is visible at first order.
    bool found = false;
    for (const auto& z : chain.front().zeros())
      if (z.multiplicity == 1 && std::abs(z.location) <= kAdversarialRadius) {
        target = z.location;
        found = true;
        break;
      }
    if (found) break;
  }
  const InnerFunction& m = chain.front();
  const int n = chain_product(chain, s.tol).degree();

  Json pairs = Json::array();
  for (int k = 0; k < kChiPairsPerInstance; ++k) {
    std::vector<Zero> vz;
    double separation = 0.0;
    if (adversarial && k == 0) {
      separation = index % 2 == 0 ? kAdversarialFar : kAdversarialNear;
      vz.push_back({target + std::polar(separation, rng.uniform(0.0, 2.0 * M_PI)), 1});
    } else {
      const int count = rng.uniform_int(1, 2);
      if (rng.uniform() < 0.5) {
        const auto& zs = m.zeros();
        vz.push_back({zs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(zs.size()) - 1))].location, 1});
      }
      while (static_cast<int>(vz.size()) < count) vz.push_back({rng.in_disk(kZeroRadius), 1});
    }
    pairs.push_back({{"v", to_json(InnerFunction(vz))},
                     {"outer", to_json(random_outer(rng, 2))},
                     {"adversarial", adversarial && k == 0},
                     {"separation", separation}});
  }

  Json phis = Json::array();
  for (int k = 0; k < kPhiPerInstance; ++k) {
    std::vector<Zero> avoid = m.zeros();
    std::vector<Zero> vz;
    const int count = rng.uniform_int(1, 2);
    for (int i = 0; i < count; ++i) {
      const Zero z{fresh_zero(rng, avoid), 1};
      vz.push_back(z);
      avoid.push_back(z);
    }
    Polynomial psi_num({rng.complex_normal(), rng.complex_normal(), rng.complex_normal()});
    Polynomial psi_den(1.0);
    if (rng.uniform() < 0.5) psi_den = Polynomial{1.0, -std::polar(rng.uniform(0.0, 0.6), rng.uniform(0.0, 2.0 * M_PI))};
    const RationalFunction chi = InnerFunction(vz).to_rational() * RationalFunction(random_outer(rng, 1));
    phis.push_back({{"psi", to_json(RationalFunction(psi_num, psi_den))}, {"chi", to_json(chi)}});
  }

  return {{"chain", chain_json(chain)},
          {"conjugator", matrix_to_json(rng.unitary(n))},
          {"dimension", n},
          {"chi_pairs", pairs},
          {"phis", phis}};
}

Json gen_smirnov(const Scenario&, Rng& rng, int) {
  std::vector<Zero> taken;
  auto roots = [&](int count) {
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) {
      cplx r = off_circle_root(rng);
      for (int attempt = 0; attempt < 200; ++attempt) {
        bool far = true;
        for (const auto& z : taken) far = far && std::abs(z.location - r) > kMinSeparation;
        if (far) break;
        r = off_circle_root(rng);
      }
      taken.push_back({r, 1});
      out.push_back(r);
    }
    return out;
  };
  const auto num = roots(rng.uniform_int(0, 3));
  const auto den = roots(rng.uniform_int(0, 3));
  const RationalFunction phi = RationalFunction::unreduced(Polynomial::from_roots(num, rng.complex_normal()),
                                                           Polynomial::from_roots(den));
  return {{"phi", to_json(phi)}};
}

Json gen_lemma(const Scenario& s, Rng& rng, int) {
  const int total_cap = std::max(2, std::min(2 * s.degree_cap, kMaxLemmaTotal));
  const int dm = rng.uniform_int(1, std::min(s.degree_cap, total_cap - 1));
  const int dq = rng.uniform_int(1, std::min(s.degree_cap, total_cap - dm));
  const InnerFunction m = random_inner(rng, dm);
  InnerFunction q;
  if (rng.uniform() < 0.3) {
    // Share zeros with m so that m' = mq has raised multiplicities.
    const InnerFunction shared = random_divisor(rng, m, std::min(dm, dq));
    q = inner_mul(shared, random_inner(rng, dq - shared.degree()), s.tol);
  } else {
    q = random_inner(rng, dq);
  }
  return {{"m", to_json(m)}, {"q", to_json(q)}};
}

Json gen_jordan(const Scenario& s, Rng& rng, int index) {
  const auto chain = random_chain(rng, rng.uniform_int(1, s.n_cap), s.degree_cap);
  const int n = chain_product(chain, s.tol).degree();
  const bool unitary = index % 2 == 0;
  const Matrix v = unitary ? rng.unitary(n) : Matrix(Matrix::Identity(n, n) + 0.3 * rng.gaussian(n, n));
  return {{"chain", chain_json(chain)},
          {"conjugation", unitary ? "unitary" : "similarity"},
          {"conjugator", matrix_to_json(v)},
          {"dimension", n},
          {"multiplicity_seed", seed_json(rng)},
          {"witness_seed", seed_json(rng)}};
}

Json gen_theta(const Scenario& s, Rng& rng, int index) {
  if (index == 0) {
    // diag(z^2, z), whose minimal function is z^2.
    const Vector e1 = Vector::Unit(2, 0);
    const Vector e2 = Vector::Unit(2, 1);
    const MatrixInnerFunction theta({PotapovFactor(0.0, e1), PotapovFactor(0.0, e1), PotapovFactor(0.0, e2)},
                                    Matrix::Identity(2, 2), s.tol);
    return {{"theta", to_json(theta)}, {"worked_instance", true}};
  }
  const int size = s.n_cap;
  const int k = rng.uniform_int(1, std::min(s.degree_cap, kMaxTheta));
  std::vector<Zero> used;
  std::vector<PotapovFactor> factors;
  for (int i = 0; i < k; ++i) {
    cplx a;
    if (!used.empty() && rng.uniform() < kRepeatProbability)
      a = used[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(used.size()) - 1))].location;
    else {
      a = fresh_zero(rng, used);
      used.push_back({a, 1});
    }
    Vector dir = rng.unit_vector(size);
    std::vector<Vector> previous;
    for (const auto& f : factors)
      if (f.zero() == a) previous.push_back(f.direction());
    // Half of the repeats are orthogonal to the earlier directions at the
    // same zero, so the minimal function drops below det Theta.
    if (!previous.empty() && static_cast<int>(previous.size()) < size && rng.uniform() < 0.5) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& p : previous) dir -= p * p.dot(dir);
      dir.normalize();
    }
    factors.emplace_back(a, dir);
  }
  const MatrixInnerFunction theta(std::move(factors), rng.unitary(size), s.tol);
  return {{"theta", to_json(theta)}, {"worked_instance", false}};
}

Json gen_blowup(const Scenario& s, Rng&, int index) {
  const int k = std::min(index + 1, s.degree_cap);
  // b_eps(S_{z^k}) has smallest singular value ~ eps^k; decades stop where
  // that reaches the default rank threshold 1e-8.
  Json eps = Json::array();
  for (int j = 1; j <= std::max(1, std::min(kBlowupDecades, kBlowupRankDigits / k)); ++j)
    eps.push_back(std::pow(10.0, -j));
  return {{"u", to_json(InnerFunction::power(k))}, {"epsilons", eps}};
}

// ------------------------------------------------------------------ checks

void check_oracle(Outcome& out, const InnerFunction& u, const Tolerances& tol) {
  const ModelSpace space(u);
  const double r = (compressed_shift(space).matrix() - compressed_shift_by_projection(space).matrix()).norm();
  out.track_max("oracle_residual", r);
  out.expect(r <= tol.oracle, "oracle", "closed form and quadrature differ by " + fmt(r) + " on a degree-" +
                                            std::to_string(u.degree()) + " space");
}

void check_annihilation(Outcome& out, const InnerFunction& m, const Operator& t, const Tolerances& tol) {
  out.bound("annihilation", spectral_norm(inner_of_operator(m, t).matrix()), tol.annihilate);
}

void check_defect(Outcome& out, const Operator& t, int expected, const Tolerances& tol) {
  const DefectClass cls = defect_classify(t, tol);
  out.measurements["defect_n"] = cls.n;
  out.measurements["defect_expected"] = expected;
  out.measurements["is_c0n"] = cls.is_c0n;
  out.expect(cls.n == expected && cls.is_c0n, "defect",
             "defect_classify gave (" + std::to_string(cls.n) + ", " + (cls.is_c0n ? "true" : "false") +
                 "), expected (" + std::to_string(expected) + ", true)");
}

/// Matches every basis element; match failures are recorded, not thrown.
void check_matches(Outcome& out, const OperatorSpaceBasis& basis, const Operator& t, const InnerFunction& m,
                   const Tolerances& tol, const OperatorSpaceBasis* commutant) {
  double worst = 0.0;
  int failed = 0;
  for (const auto& a : basis.basis) {
    try {
      worst = std::max(worst, match_calculus(a, t, m, tol, commutant).residual);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::match_failure && e.kind() != ErrorKind::invalid_input) throw;
      ++failed;
    }
  }
  out.measurements["max_match_residual"] = worst;
  out.measurements["match_failures"] = failed;
  out.expect(failed == 0, "match", std::to_string(failed) + " basis elements are not polynomials in T");
}

Outcome check_commutant(const Scenario& s, const Json& inst) {
  Outcome out;
  const InnerFunction u = inner_from_json(inst.at("u"), s.tol);
  check_oracle(out, u, s.tol);
  const Operator t = compressed_shift(ModelSpace(u));
  const OperatorSpaceBasis comm = commutant_basis(t, s.tol);
  out.measurements["degree"] = u.degree();
  out.measurements["dimension"] = comm.dimension();
  out.expect(comm.dimension() == u.degree(), "dimension",
             "commutant dimension " + std::to_string(comm.dimension()) + " != degree " + std::to_string(u.degree()));
  check_matches(out, comm, t, u, s.tol, nullptr);
  return out;
}

Outcome check_bicommutant(const Scenario& s, const Json& inst) {
  Outcome out;
  const auto chain = chain_from(inst.at("chain"), s.tol);
  for (const auto& u : chain) check_oracle(out, u, s.tol);
  const Eigen::Index n = inst.at("dimension").get<Eigen::Index>();
  const Matrix w = matrix_from_json(inst.at("conjugator"), n, n);
  const Operator t = Operator::on(w * jordan_operator(chain).matrix() * w.adjoint());
  const InnerFunction& expected_m = chain.front();

  const InnerFunction m = minimal_function(t, chain_product(chain, s.tol).zero_set(), s.tol);
  out.measurements["minimal_degree"] = m.degree();
  out.expect(equal_up_to_constant(m, expected_m, s.tol), "minimal-function",
             "rank-sequence minimal function differs from the largest chain function");
  check_annihilation(out, m, t, s.tol);
  check_defect(out, t, static_cast<int>(chain.size()), s.tol);

  const OperatorSpaceBasis comm = commutant_basis(t, s.tol);
  const OperatorSpaceBasis bic = commutant_of_set(comm.basis, s.tol);
  out.measurements["commutant_dimension"] = comm.dimension();
  out.measurements["dimension"] = bic.dimension();
  out.expect(bic.dimension() == m.degree(), "dimension",
             "bicommutant dimension " + std::to_string(bic.dimension()) + " != deg m_T " +
                 std::to_string(m.degree()));
  check_matches(out, bic, t, m, s.tol, &comm);

  double converse = 0.0, converse_abs = 0.0, phi_norm = 0.0;
  for (const auto& p : inst.at("phis")) {
    const NevanlinnaFunction phi(rational_from_json(p.at("psi")), rational_from_json(p.at("chi")), s.tol);
    const Matrix g = nevanlinna_apply(phi, t, s.tol).matrix();
    const double r = bic.span_residual(g);
    converse = std::max(converse, r / std::max(1.0, g.norm()));
    converse_abs = std::max(converse_abs, r);
    phi_norm = std::max(phi_norm, g.norm());
  }
  out.measurements["phi_count"] = inst.at("phis").size();
  out.measurements["max_phi_span_residual_abs"] = converse_abs;
  out.measurements["max_phi_norm"] = phi_norm;
  out.bound("max_phi_span_residual", converse, s.tol.span);

  int pairs = 0, agree = 0, adversarial = 0, adversarial_agree = 0;
  for (const auto& p : inst.at("chi_pairs")) {
    const InnerFunction v = inner_from_json(p.at("v"), s.tol);
    const RationalFunction chi = v.to_rational() * RationalFunction(polynomial_from_json(p.at("outer")));
    const bool member = k_infinity_member(chi, t, s.tol);
    const bool coprime = relatively_prime(v, m, s.tol);
    ++pairs;
    agree += member == coprime;
    if (p.at("adversarial").get<bool>()) {
      ++adversarial;
      adversarial_agree += member == coprime;
    }
    out.expect(member == coprime, "k-infinity",
               std::string("k_infinity_member = ") + (member ? "true" : "false") + " but relatively_prime = " +
                   (coprime ? "true" : "false") + " (separation " + fmt(p.at("separation").get<double>()) + ")");
  }
  out.measurements["kinf_pairs"] = pairs;
  out.measurements["kinf_agree"] = agree;
  out.measurements["kinf_adversarial"] = adversarial;
  out.measurements["kinf_adversarial_agree"] = adversarial_agree;
  return out;
}

Outcome check_smirnov(const Scenario& s, const Json& inst) {
  Outcome out;
  const RationalFunction phi = rational_from_json(inst.at("phi"));
  const SmirnovTriple c = smirnov_canonical(phi, s.tol);
  const Vector pts = circle_points(kBoundarySamples);
  double unit = 0.0, recon = 0.0;
  for (Eigen::Index k = 0; k < pts.size(); ++k) {
    const cplx z = pts(k);
    const cplx a = c.a(z), b = c.b(z);
    unit = std::max(unit, std::abs(std::norm(a) + std::norm(b) - 1.0));
    const cplx f = phi(z);
    recon = std::max(recon, std::abs(b / (inner_eval(c.v, z) * a) - f) / std::max(1.0, std::abs(f)));
  }
  out.bound("unit_residual", unit, s.tol.fr);
  out.bound("reconstruction_residual", recon, s.tol.fr);

  double closest = INFINITY;
  for (const auto& r : poly_roots(c.a.numerator(), s.tol).roots) closest = std::min(closest, std::abs(r.location));
  for (const auto& r : c.a.poles(s.tol).roots) closest = std::min(closest, std::abs(r.location));
  out.measurements["a_closest_zero_or_pole"] = closest;
  out.expect(closest > 1.0 + s.tol.pair, "a-outer", "a has a zero or pole at modulus " + fmt(closest));

  const cplx a0 = c.a(0.0);
  out.measurements["a0"] = to_json(a0);
  out.expect(a0.real() > 0.0 && std::abs(a0.imag()) <= s.tol.eval * std::abs(a0), "a0",
             "a(0) = " + fmt(a0.real()) + (a0.imag() < 0 ? "" : "+") + fmt(a0.imag()) + "i is not real positive");
  const InnerFunction b_inner = inner_outer_factorize(c.b, s.tol).inner;
  out.expect(relatively_prime(b_inner, c.v, s.tol), "coprime", "inner parts of b and v share a zero");
  out.measurements["v_degree"] = c.v.degree();
  return out;
}

Outcome check_lemma(const Scenario& s, const Json& inst) {
  Outcome out;
  const InnerFunction m = inner_from_json(inst.at("m"), s.tol);
  const InnerFunction q = inner_from_json(inst.at("q"), s.tol);
  const InnerFunction mq = inner_mul(m, q, s.tol);
  for (const auto* u : {&m, &q, &mq}) check_oracle(out, *u, s.tol);
  const ModelSpace small(m), big(mq), kq(q);
  const Matrix r = embed_R(m, q, s.tol).matrix();
  const Matrix qm = quotient_Q(m, q, s.tol).matrix();
  const Matrix sm = compressed_shift(small).matrix();
  const Matrix sbig = compressed_shift(big).matrix();
  const int dm = m.degree(), dq = q.degree(), dbig = mq.degree();
  out.measurements["deg_m"] = dm;
  out.measurements["deg_q"] = dq;

  out.bound("isometry_residual", (r.adjoint() * r - Matrix::Identity(dm, dm)).norm(), s.tol.lemma);
  out.bound("embed_intertwining", (sbig * r - r * sm).norm(), s.tol.lemma);
  out.bound("quotient_intertwining", (sm * qm - qm * sbig).norm(), s.tol.lemma);
  const int rank_q = numerical_rank(qm, s.tol.rank);
  out.measurements["rank_Q"] = rank_q;
  out.expect(rank_q == dm, "surjective", "rank Q = " + std::to_string(rank_q) + " < deg m = " + std::to_string(dm));

  // K^2_{m'} = K^2_q + ran R, orthogonally.
  const Matrix kq_in_big = multiplication_operator(kq, InnerFunction{}, big).matrix();
  out.bound("range_orthogonality", (r.adjoint() * kq_in_big).norm(), s.tol.lemma);
  out.expect(dm + dq == dbig, "decomposition-dimension", "deg m + deg q != deg m'");

  auto projector = [](const Matrix& basis) -> Matrix { return basis * basis.adjoint(); };
  const Matrix ker = null_space(qm, s.tol.rank);
  const Matrix m_kq = range_basis(multiplication_operator(kq, m, big).matrix(), s.tol.rank);
  const Matrix kq_basis = range_basis(kq_in_big, s.tol.rank);
  out.measurements["kernel_dimension"] = ker.cols();
  out.expect(ker.cols() == dq && m_kq.cols() == dq, "kernel-dimension",
             "dim ker Q = " + std::to_string(ker.cols()) + ", expected " + std::to_string(dq));
  const double computed =
      ker.cols() == m_kq.cols() ? spectral_norm(projector(ker) - projector(m_kq)) : 1.0;
  out.bound("kernel_distance", computed, s.tol.kernel);
  // Distance to the subspace named by the quoted claim; recorded only.
  out.measurements["kernel_claim_distance"] =
      ker.cols() == kq_basis.cols() ? spectral_norm(projector(ker) - projector(kq_basis)) : 1.0;
  Matrix joint(dbig, r.cols() + ker.cols());
  joint << r, ker;
  out.measurements["direct_sum_claim_holds"] = numerical_rank(joint, s.tol.rank) == dbig;
  return out;
}

Outcome check_jordan(const Scenario& s, const Json& inst) {
  Outcome out;
  const auto chain = chain_from(inst.at("chain"), s.tol);
  for (const auto& u : chain) check_oracle(out, u, s.tol);
  const Eigen::Index n = inst.at("dimension").get<Eigen::Index>();
  const Matrix v = matrix_from_json(inst.at("conjugator"), n, n);
  const Matrix base = jordan_operator(chain).matrix();
  const bool unitary = inst.at("conjugation").get<std::string>() == "unitary";
  const Operator t = Operator::on(unitary ? Matrix(v * base * v.adjoint())
                                          : stein_contraction(v * base * v.partialPivLu().inverse()));
  const RootSet hint = chain_product(chain, s.tol).zero_set();

  const JordanModel model = jordan_model(t, hint, s.tol);
  bool same = model.functions.size() == chain.size();
  for (std::size_t i = 0; same && i < chain.size(); ++i)
    same = equal_up_to_constant(model.functions[i], chain[i], s.tol);
  out.measurements["chain_length"] = chain.size();
  out.measurements["recovered_length"] = model.functions.size();
  out.measurements["recovered"] = same;
  out.expect(same, "jordan-model", "recovered Jordan model differs from the generating chain");

  const InnerFunction m = minimal_function(t, hint, s.tol);
  check_annihilation(out, m, t, s.tol);
  // Unitary conjugates keep defect N; the contractive similarity conjugates
  // have full defect.
  check_defect(out, t, unitary ? static_cast<int>(chain.size()) : static_cast<int>(n), s.tol);

  const MultiplicityResult mu = multiplicity(t, hint, inst.at("multiplicity_seed").get<std::uint64_t>(), s.tol);
  out.measurements["multiplicity"] = mu.value;
  out.measurements["generator_check"] = mu.generator_check;
  out.expect(mu.value == static_cast<int>(chain.size()) && mu.generator_check, "multiplicity",
             "multiplicity " + std::to_string(mu.value) + " (generator check " +
                 (mu.generator_check ? "passed" : "failed") + "), expected " + std::to_string(chain.size()));

  try {
    const QuasiSimilarityWitness w =
        quasi_similarity_witness(t, JordanModel{chain}, inst.at("witness_seed").get<std::uint64_t>(), s.tol);
    const Matrix sm = jordan_operator(chain).matrix();
    const double scale = std::max(1.0, w.x.matrix().norm()) + std::max(1.0, w.y.matrix().norm());
    const double res = ((t.matrix() * w.x.matrix() - w.x.matrix() * sm).norm() +
                        (sm * w.y.matrix() - w.y.matrix() * t.matrix()).norm()) /
                       scale;
    out.measurements["witness"] = "found";
    out.measurements["witness_draws"] = w.draws;
    out.bound("witness_residual", res, s.tol.op);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::witness_failure) throw;
    out.measurements["witness"] = "inconclusive";
    out.inconclusive = true;
  }
  return out;
}

Outcome check_theta(const Scenario& s, const Json& inst) {
  Outcome out;
  const MatrixInnerFunction theta = matrix_inner_from_json(inst.at("theta"), s.tol);
  const InnerFunction formula = minimal_function_from_theta(theta, s.tol);
  const Operator t = model_operator(theta, s.tol);
  const RootSet hint = theta.determinant().zero_set();
  const InnerFunction direct = minimal_function(t, hint, s.tol);
  out.measurements["size"] = theta.size();
  out.measurements["degree"] = theta.determinant().degree();
  out.measurements["formula"] = to_json(formula);
  out.measurements["formula_degree"] = formula.degree();
  out.expect(equal_up_to_constant(formula, direct, s.tol), "formula",
             "formula minimal function (degree " + std::to_string(formula.degree()) +
                 ") differs from the rank-sequence one (degree " + std::to_string(direct.degree()) + ")");
  if (inst.at("worked_instance").get<bool>())
    out.expect(equal_up_to_constant(formula, InnerFunction::power(2), s.tol), "worked-instance",
               "diag(z^2, z) did not give z^2");
  check_annihilation(out, direct, t, s.tol);

  const Matrix at0 = theta(0.0);
  const Matrix gap = Matrix::Identity(theta.size(), theta.size()) - at0.adjoint() * at0;
  check_defect(out, t, numerical_rank_floor(gap, s.tol.rank, 1.0), s.tol);
  const int mu = multiplicity(t, hint, 0x6d75, s.tol).value;
  out.measurements["multiplicity"] = mu;
  out.expect(mu <= theta.size(), "multiplicity", "multiplicity exceeds the size of Theta");
  return out;
}

Outcome check_blowup(const Scenario& s, const Json& inst) {
  Outcome out;
  const InnerFunction u = inner_from_json(inst.at("u"), s.tol);
  check_oracle(out, u, s.tol);
  const Operator t = compressed_shift(ModelSpace(u));
  Json table = Json::array();
  std::vector<double> norms;
  for (const auto& e : inst.at("epsilons")) {
    const double eps = e.get<double>();
    const NevanlinnaFunction phi(RationalFunction(1.0), InnerFunction::blaschke(eps).to_rational(), s.tol);
    const double norm = spectral_norm(nevanlinna_apply(phi, t, s.tol).matrix());
    norms.push_back(norm);
    table.push_back({{"epsilon", eps}, {"norm", norm}});
  }
  out.measurements["degree"] = u.degree();
  out.measurements["table"] = table;
  if (u.degree() == 1) {
    double worst = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const double eps = inst.at("epsilons")[i].get<double>();
      worst = std::max(worst, std::abs(norms[i] * eps - 1.0));
    }
    out.bound("relative_error", worst, kMachineRelative);
  } else {
    double slowest = INFINITY;
    for (std::size_t i = 1; i < norms.size(); ++i) slowest = std::min(slowest, norms[i] / norms[i - 1]);
    out.measurements["min_growth"] = slowest;
    out.expect(slowest >= kBlowupGrowth, "growth", "norm grew by only " + fmt(slowest) + " over a decade");
  }
  bool monotone = true;
  for (std::size_t i = 1; i < norms.size(); ++i) monotone = monotone && norms[i] > norms[i - 1];
  out.expect(monotone, "monotone", "norm table is not increasing as epsilon decreases");
  return out;
}

using Generator = std::function<Json(const Scenario&, Rng&, int)>;
using Checker = std::function<Outcome(const Scenario&, const Json&)>;

const Generator& generator_for(Suite s) {
  static const std::vector<Generator> all{gen_commutant, gen_bicommutant, gen_smirnov, gen_lemma,
                                          gen_jordan,    gen_theta,       gen_blowup};
  return all[static_cast<std::size_t>(s)];
}

const Checker& checker_for(Suite s) {
  static const std::vector<Checker> all{check_commutant, check_bicommutant, check_smirnov, check_lemma,
                                        check_jordan,    check_theta,       check_blowup};
  return all[static_cast<std::size_t>(s)];
}

// ------------------------------------------------------------------- notes

std::vector<Json> suite_notes(const Scenario& s, const std::vector<Json>& records) {
  std::vector<Json> notes;
  auto measured = [&](const char* key) {
    std::vector<Json> out;
    for (const auto& r : records)
      if (r.at("measurements").contains(key)) out.push_back(r.at("measurements").at(key));
    return out;
  };
  if (s.suite == Suite::lemma_embed) {
    const auto claim = measured("kernel_claim_distance");
    const auto computed = measured("kernel_distance");
    int fails = 0;
    double lo = INFINITY, hi = 0.0, comp = 0.0;
    for (const auto& d : claim) {
      fails += d.get<double>() > s.tol.kernel;
      lo = std::min(lo, d.get<double>());
      hi = std::max(hi, d.get<double>());
    }
    for (const auto& d : computed) comp = std::max(comp, d.get<double>());
    notes.push_back({{"kind", "erratum-candidate"},
                     {"claim", "ker Q_j = K²_{q_j}"},
                     {"computed", "ker Q = m·K²_q"},
                     {"evidence",
                      {{"instances", claim.size()},
                       {"claim_fails", fails},
                       {"min_claim_distance", claim.empty() ? 0.0 : lo},
                       {"max_claim_distance", hi},
                       {"max_computed_distance", comp}}}});
    int split_fails = 0;
    const auto holds = measured("direct_sum_claim_holds");
    for (const auto& h : holds) split_fails += !h.get<bool>();
    notes.push_back({{"kind", "erratum-candidate"},
                     {"claim", "K²_1 = H⁰_j ⊕ ker Q_j"},
                     {"computed", "K²_{m′} = K²_q ⊕ H⁰"},
                     {"evidence", {{"instances", holds.size()}, {"claim_fails", split_fails}}}});
  } else if (s.suite == Suite::smirnov) {
    const auto a0 = measured("a0");
    int positive = 0;
    double lo = INFINITY;
    for (const auto& v : a0) {
      const cplx z = complex_from_json(v);
      positive += z.real() > 0.0;
      lo = std::min(lo, z.real());
    }
    notes.push_back({{"kind", "erratum-candidate"},
                     {"claim", "a(0) = 0"},
                     {"computed", "a(0) > 0 real; an outer function has no zero in the disk"},
                     {"evidence",
                      {{"instances", a0.size()}, {"a0_positive", positive}, {"min_a0", a0.empty() ? 0.0 : lo}}}});
  } else if (s.suite == Suite::bicommutant) {
    notes.push_back({{"kind", "note"},
                     {"topic", "bicommutant"},
                     {"finding",
                      "in finite dimension every operator commuting with the commutant is bounded, so the "
                      "bicommutant and its unbounded counterpart coincide and are checked as one"}});
  }
  return notes;
}

}  // namespace

// ------------------------------------------------------------------ public

std::string_view to_string(Suite s) { return kSuites[static_cast<std::size_t>(s)]; }

const std::vector<std::string>& suite_names() { return kSuites; }

Suite suite_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kSuites.size(); ++i)
    if (kSuites[i] == name) return static_cast<Suite>(i);
  throw Error(ErrorKind::invalid_input, "unknown suite: " + std::string(name));
}

void Scenario::validate() const {
  if (degree_cap < 1 || degree_cap > 12)
    throw Error(ErrorKind::invalid_input, "degree_cap must be in [1, 12]");
  if (n_cap < 1 || n_cap > 3) throw Error(ErrorKind::invalid_input, "n_cap must be in [1, 3]");
  if (instance_count < 1) throw Error(ErrorKind::invalid_input, "instance_count must be at least 1");
  if (jobs < 1) throw Error(ErrorKind::invalid_input, "jobs must be at least 1");
}

Json Scenario::to_json() const {
  Json tols = Json::object();
  for (const auto& name : Tolerances::names()) tols[name] = tol.get(name);
  return {{"suite", std::string(to_string(suite))},
          {"seed", seed},
          {"degree_cap", degree_cap},
          {"n_cap", n_cap},
          {"instance_count", instance_count},
          {"tolerances", tols}};
}

Scenario Scenario::from_json(const Json& j) {
  Scenario s;
  try {
    s.suite = suite_from_string(j.at("suite").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.degree_cap = j.at("degree_cap").get<int>();
    s.n_cap = j.at("n_cap").get<int>();
    s.instance_count = j.at("instance_count").get<int>();
    for (const auto& [name, value] : j.at("tolerances").items()) s.tol.set(name, value.get<double>());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Json generate_instance(const Scenario& s, int index) {
  s.validate();
  Rng rng(Rng::mix(s.seed, static_cast<std::uint64_t>(s.suite) + 1, static_cast<std::uint64_t>(index)));
  return generator_for(s.suite)(s, rng, index);
}

Json check_instance(const Scenario& s, int index, const Json& instance) {
  Json record{{"index", index}, {"instance", instance}};
  try {
    Outcome out = checker_for(s.suite)(s, instance);
    record["measurements"] = out.measurements;
    record["failures"] = out.failures;
    record["status"] = !out.failures.empty() ? "fail" : out.inconclusive ? "inconclusive" : "pass";
  } catch (const Error& e) {
    record["measurements"] = Json::object();
    record["failures"] = Json::array();
    record["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    record["status"] = e.kind() == ErrorKind::spanning_failure ? "rejected" : "fail";
  }
  return record;
}

int Report::count(std::string_view status) const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [&](const Json& r) {
    return r.at("status").get<std::string>() == status;
  }));
}

Json Report::summary() const {
  return {{"instances", records.size()},
          {"pass", count("pass")},
          {"fail", count("fail")},
          {"inconclusive", count("inconclusive")},
          {"rejected", count("rejected")},
          {"hard_failure", hard_failure()}};
}

Json Report::to_json() const {
  Json recs = Json::array();
  for (const auto& r : records) recs.push_back(r);
  Json ns = Json::array();
  for (const auto& n : notes) ns.push_back(n);
  return {{"schema", std::string(kReportSchema)},
          {"scenario", scenario.to_json()},
          {"records", recs},
          {"summary", summary()},
          {"notes", ns}};
}

Report run_suite(const Scenario& s) {
  s.validate();
  Report report;
  report.scenario = s;
  report.records.resize(static_cast<std::size_t>(s.instance_count));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < s.instance_count; i = next++) {
      // The check reads the serialized instance, exactly as replay does.
      const Json instance = parse_json(canonical_dump(generate_instance(s, i)));
      report.records[static_cast<std::size_t>(i)] = check_instance(s, i, instance);
    }
  };
  const int workers = std::min(s.jobs, s.instance_count);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  report.notes = suite_notes(s, report.records);
  return report;
}

void emit_report(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open report file: " + path);
  out << canonical_dump(r.to_json()) << '\n';
  if (!out) throw Error(ErrorKind::io, "failed writing report file: " + path);
}

Json load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open report file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json j = parse_json(buf.str());
  if (!j.is_object() || j.value("schema", "") != kReportSchema)
    throw Error(ErrorKind::io, "not a " + std::string(kReportSchema) + " report: " + path);
  return j;
}

ReplayResult replay(const Json& report, int index) {
  const Scenario s = Scenario::from_json(report.at("scenario"));
  for (const auto& rec : report.at("records")) {
    if (rec.at("index").get<int>() != index) continue;
    ReplayResult out;
    out.record = check_instance(s, index, rec.at("instance"));
    out.identical = out.record.at("status") == rec.at("status") &&
                    canonical_dump(out.record.at("measurements")) == canonical_dump(rec.at("measurements")) &&
                    canonical_dump(out.record.at("failures")) == canonical_dump(rec.at("failures"));
    return out;
  }
  throw Error(ErrorKind::index_out_of_range, "report has no record with index " + std::to_string(index));
}

}  // namespace mslab
