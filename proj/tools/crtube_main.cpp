// crtube: exact verification engine for the light-cone tube geometry.
//
// Every computation is exact over Q(i, sqrt2); reports are canonical JSON
// (sorted keys, rationals as "p/q") and bit-identical across reruns with the
// same parameters and seed. Exit codes: 0 all asserted identities hold,
// 1 verification failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "crtube/dsl.hpp"
#include "crtube/germs.hpp"
#include "crtube/liealg.hpp"
#include "crtube/matrixgeo.hpp"
#include "crtube/parallel.hpp"
#include "crtube/report.hpp"
#include "crtube/rng.hpp"

using namespace crtube;

namespace {

struct CommonOpts {
  std::string surface = "Mt";
  std::string tText = "1";
  std::string germText;
  int d = 2;
  int D = 0;  // 0: resolve from env or default 8
  uint64_t seed = 12345;
  std::string output;
  bool timing = false;
  bool serial = false;
};

int resolveD(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CRTUBE_DEFAULT_D")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 8;
}

Rational parseT(const std::string& text) { return Rational::fromString(text); }

HypersurfaceGerm resolveGerm(const CommonOpts& o, int cutoff) {
  if (!o.germText.empty()) return dsl::parseGerm(o.germText, 2, cutoff, false);
  if (o.surface == "M0") return familyGerm(Rational(0), cutoff);
  if (o.surface == "M1") return familyGerm(Rational(1), cutoff);
  if (o.surface == "Mt") return familyGerm(parseT(o.tText), cutoff);
  throw CLI::ValidationError("--surface must be one of Mt, M0, M1 (or use --germ)");
}

Rational surfaceT(const CommonOpts& o) {
  if (o.surface == "M0") return Rational(0);
  if (o.surface == "M1") return Rational(1);
  return parseT(o.tText);
}

HoloVectorField resolveField(const std::string& text, const Rational& t) {
  if (text == "zeta1") return zeta1Field();
  if (text == "zeta2") return zeta2Field();
  if (text == "izeta2") return zeta2Field().scaled(Scalar::i());
  if (text == "eta") return etaField();
  if (text == "chi") return chiField();
  if (text == "xi2") return rootField(LatticePoint{2, 0}, t);
  if (text == "xi2i") return rootField(LatticePoint{0, 2}, t);
  return dsl::parseField(text);
}

Json paramsJson(const CommonOpts& o, bool withSurface, bool withBounds) {
  Json p = Json::object();
  if (withSurface) {
    if (!o.germText.empty()) p["germ"] = o.germText;
    else {
      p["surface"] = o.surface;
      if (o.surface == "Mt") p["t"] = parseT(o.tText).strPQ();
    }
  }
  if (withBounds) {
    p["d"] = o.d;
    p["D"] = resolveD(o.D);
  }
  p["seed"] = o.seed;
  return p;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

int finish(Json& report, const CommonOpts& o, bool pass, const Timer& timer) {
  report["ok"] = pass;
  if (o.timing) report["timing_ms"] = timer.ms();
  std::cout << dumpReport(report);
  if (!o.output.empty()) emitReport(report, o.output);
  return pass ? 0 : 1;
}

Json gradingJson(const AdGradingResult& g) {
  Json dims = Json::object();
  for (const auto& [l, d] : g.dims) dims[l.str()] = d;
  Json out = Json::object();
  out["dims"] = dims;
  out["sums_to_dim"] = g.sumsToDim;
  out["bracket_graded"] = g.bracketGraded;
  return out;
}

Json stabilityJson(const HolBasisReport& rep) {
  Json st = Json::array();
  for (const auto& [Dp, dim] : rep.stability)
    st.push_back(Json::object({{"D", Dp}, {"dimension", dim}}));
  return st;
}

int runHolDim(const CommonOpts& o, bool withClassify) {
  Timer timer;
  const int D = resolveD(o.D);
  HypersurfaceGerm germ = resolveGerm(o, D + o.d + 1);
  HolBasisReport rep = holSolve(germ, o.d, D);

  bool pass = true;
  for (const auto& b : rep.basis)
    if (isTangent(b, germ, D)) pass = false;

  Json report = reportSkeleton(withClassify ? "classify" : "hol-dim", paramsJson(o, true, true));
  report["dimension"] = rep.dimension;
  report["stability"] = stabilityJson(rep);
  report["stable"] = rep.stable;
  Json basis = Json::array();
  for (const auto& b : rep.basis) basis.push_back(jsonField(b));
  report["basis"] = basis;

  if (rep.dimension > 0) {
    LiePresentation p = structureConstants(rep.basis);
    report["closed"] = p.closed;
    if (p.closed) {
      KillingData k = killingSignature(p);
      report["killing"] = jsonKilling(k);
      report["label"] = classifyAlgebra(p);
      SolvabilityResult s = solvability(p);
      report["solvable"] = s.solvable;
      report["derived_dims"] = s.derivedDims;
    }
    bool hasZeta1 = memberCoords(p, zeta1Field()).has_value();
    bool hasIZeta2 = memberCoords(p, zeta2Field().scaled(Scalar::i())).has_value();
    report["contains_zeta1"] = hasZeta1;
    report["contains_izeta2"] = hasIZeta2;
    if (o.germText.empty() && (!hasZeta1 || !hasIZeta2)) pass = false;
  }
  return finish(report, o, pass, timer);
}

int runTangency(const CommonOpts& o, const std::string& fieldText, const std::string& expect) {
  Timer timer;
  const int D = resolveD(o.D);
  HoloVectorField xi = resolveField(fieldText, surfaceT(o));
  HypersurfaceGerm germ = resolveGerm(o, D + std::max(1, xi.degree()) + 1);
  std::optional<TruncatedSeries> res = isTangent(xi, germ, D);

  Json report = reportSkeleton("tangency", paramsJson(o, true, true));
  report["field"] = fieldText;
  report["tangent"] = !res.has_value();
  if (res) {
    auto lead = res->leadingTerm();
    if (lead)
      report["residual"] = Json::object(
          {{"monomial", monomialStr(res->vars(), lead->first)}, {"value", jsonScalar(lead->second)}});
  }
  bool pass = expect == "residual" ? res.has_value() : !res.has_value();
  return finish(report, o, pass, timer);
}

int runBracket(const CommonOpts& o, const std::string& f1, const std::string& f2,
               const std::string& expect) {
  Timer timer;
  Rational t = surfaceT(o);
  HoloVectorField a = resolveField(f1, t);
  HoloVectorField b = resolveField(f2, t);
  HoloVectorField br = bracket(a, b);
  Json report = reportSkeleton("bracket", paramsJson(o, false, false));
  report["f1"] = f1;
  report["f2"] = f2;
  report["bracket"] = jsonField(br);
  bool pass = true;
  if (!expect.empty()) {
    pass = (br == resolveField(expect, t));
    report["matches_expected"] = pass;
  }
  return finish(report, o, pass, timer);
}

int runGrading(const CommonOpts& o, const std::string& target, int bound) {
  Timer timer;
  Json report = reportSkeleton("grading", paramsJson(o, target != "tube", target != "tube"));
  report["target"] = target;
  bool pass = true;
  if (target == "tube") {
    LiePresentation p = structureConstants(sp2Basis());
    auto z1 = memberCoords(p, tubeZeta1());
    auto z2 = memberCoords(p, tubeZeta2());
    AdGradingResult g = adGrading(p, *z1, *z2, bound);
    report["grading"] = gradingJson(g);
    pass = g.sumsToDim && g.bracketGraded;
  } else {
    const int D = resolveD(o.D);
    HypersurfaceGerm germ = resolveGerm(o, D + o.d + 1);
    HolBasisReport rep = holSolve(germ, o.d, D);
    report["dimension"] = rep.dimension;
    LiePresentation p = structureConstants(rep.basis);
    auto z1 = memberCoords(p, zeta1Field());
    auto iz2 = memberCoords(p, zeta2Field().scaled(Scalar::i()));
    if (!p.closed || !z1 || !iz2) {
      report["error"] = "algebra does not contain the dilation pair or is not closed";
      return finish(report, o, false, timer);
    }
    QVec x = *z1;
    for (size_t i = 0; i < x.size(); ++i) x[i] += (*iz2)[i];
    AdGradingResult g = adGrading(p, x, QVec(p.dim()), bound);
    report["grading"] = gradingJson(g);
    pass = g.sumsToDim && g.bracketGraded;
  }
  return finish(report, o, pass, timer);
}

int runLevi(const CommonOpts& o, const std::string& z1Text, const std::string& z2Text) {
  Timer timer;
  HypersurfaceGerm germ = resolveGerm(o, 6);
  auto scalarOf = [](const std::string& text) {
    TruncatedSeries s = dsl::evalSeries(dsl::parse(text), 2, 0);
    return s.constantTerm();
  };
  std::vector<Scalar> pt{scalarOf(z1Text), scalarOf(z2Text)};
  LeviResult l = leviMatrix(germ, pt);
  Json report = reportSkeleton("levi", paramsJson(o, true, false));
  Json mat = Json::array();
  for (const auto& row : l.matrix) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(jsonScalar(e));
    mat.push_back(r);
  }
  report["matrix"] = mat;
  report["determinant"] = jsonScalar(l.determinant);
  Json kernel = Json::array();
  for (const auto& v : l.kernelBasis) {
    Json k = Json::array();
    for (const auto& e : v) k.push_back(jsonScalar(e));
    kernel.push_back(k);
  }
  report["kernel"] = kernel;
  bool hermitian = true;
  for (size_t i = 0; i < l.matrix.size(); ++i)
    for (size_t j = 0; j < l.matrix.size(); ++j)
      if (l.matrix[i][j] != l.matrix[j][i].conj()) hermitian = false;
  report["hermitian"] = hermitian;
  return finish(report, o, hermitian, timer);
}

int runVerifyMap(const CommonOpts& o, const std::string& mapId, int p, int k) {
  Timer timer;
  const int D = resolveD(o.D);
  MapVerifyReport r = mapVerify(mapId, D, p, k);
  Json report = reportSkeleton("verify-map", paramsJson(o, false, false));
  report["map"] = mapId;
  if (mapId == "phi_ob") {
    report["p"] = p;
    report["k"] = k;
  }
  report["D"] = D;
  report["inverse_identity"] = r.inverseIdentity;
  report["forward_identity"] = r.forwardIdentity;
  report["target_identity"] = r.targetIdentity;
  report["base_point_on_target"] = r.basePointOnTarget;
  if (!r.residual.empty()) report["residual"] = r.residual;
  if (!r.pushforwardFactors.empty()) {
    Json pf = Json::object();
    for (const auto& [k2, v] : r.pushforwardFactors) pf[k2] = v;
    report["pushforward_factors"] = pf;
  }
  bool pass =
      r.inverseIdentity && r.forwardIdentity && r.targetIdentity && r.basePointOnTarget;
  return finish(report, o, pass, timer);
}

int runTubeChecks(const CommonOpts& o, int samples) {
  Timer timer;
  DetRng rng(o.seed);
  Json report = reportSkeleton("tube-checks", paramsJson(o, false, false));
  report["samples"] = samples;
  bool pass = true;

  // Membership examples.
  {
    SMat onT = {{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(0)}};
    SMat inH = {{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}};
    SMat neither = {{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(-1)}};
    bool ok = tubeMembership(SymMatrixPoint::make(onT)).verdict == TubeVerdict::OnTube &&
              tubeMembership(SymMatrixPoint::make(inH)).verdict == TubeVerdict::InDomain &&
              tubeMembership(SymMatrixPoint::make(neither)).verdict == TubeVerdict::Neither;
    report["membership_examples"] = ok;
    pass = pass && ok;
  }

  // Affine invariance for sampled invertible rational g.
  {
    bool ok = true;
    for (int t = 0; t < samples; ++t) {
      QMat g(2, QVec(2));
      do {
        for (auto& row : g)
          for (auto& e : row) e = rng.rational(5, 3);
      } while ((g[0][0] * g[1][1] - g[0][1] * g[1][0]).isZero());
      AffineCheck c = affineInvarianceCheck(g, 3, rng);
      ok = ok && c.detIdentity && c.translationFixed && c.samplesOnTube;
    }
    report["affine_invariance"] = ok;
    pass = pass && ok;
  }

  // The ten-field automorphism basis.
  {
    std::vector<HoloVectorField> basis = sp2Basis();
    bool tangentAll = true;
    for (const auto& xi : basis) tangentAll = tangentAll && !coneTangency(xi).has_value();
    report["cone_tangency"] = tangentAll;
    pass = pass && tangentAll;

    LiePresentation p = structureConstants(basis);
    report["closed"] = p.closed;
    pass = pass && p.closed;
    KillingData k = killingSignature(p);
    report["killing"] = jsonKilling(k);
    pass = pass && k.rank == 10 && k.positives == 6 && k.negatives == 4;
    report["label"] = classifyAlgebra(p);

    auto z1 = memberCoords(p, tubeZeta1());
    auto z2 = memberCoords(p, tubeZeta2());
    AdGradingResult g = adGrading(p, *z1, *z2, 4);
    report["grading"] = gradingJson(g);
    int roots1d = 0;
    for (const auto& [l, d] : g.dims)
      if (!(l == LatticePoint{0, 0}) && d == 1) ++roots1d;
    pass = pass && g.sumsToDim && g.bracketGraded && roots1d == 8 &&
           g.dims.at(LatticePoint{0, 0}) == 2;
  }

  // Bounded-realization membership of the real root combinations.
  {
    bool ok = ballFieldMembership(tubeZeta1().scaled(Scalar::i())) &&
              ballFieldMembership(tubeZeta2().scaled(Scalar::i())) &&
              !ballFieldMembership(tubeZeta1());
    std::vector<LatticePoint> roots{{2, 0}, {0, 2}, {1, 1}, {1, -1}};
    for (const auto& nu : roots) {
      HoloVectorField plusF = tubeRootField(nu);
      HoloVectorField minusF = tubeRootField(LatticePoint{-nu.re, -nu.im});
      ok = ok && ballFieldMembership(plusF + minusF);
      ok = ok && ballFieldMembership((plusF - minusF).scaled(Scalar::i()));
    }
    report["ball_membership"] = ok;
    pass = pass && ok;
  }

  // Invariant-function checks on SL(2, C).
  {
    DeltaReport d = deltaChecks(samples, rng);
    Json dj = Json::object();
    dj["flip_identity"] = d.flipIdentity;
    dj["left_right_invariance"] = d.leftRightInvariance;
    dj["hermitian_invariance"] = d.hermitianInvariance;
    dj["critical_value_example"] = d.criticalValueExample;
    report["delta"] = dj;
    pass = pass && d.flipIdentity && d.leftRightInvariance && d.hermitianInvariance &&
           d.criticalValueExample;
  }
  return finish(report, o, pass, timer);
}

int runQt(const CommonOpts& o, int samples) {
  Timer timer;
  DetRng rng(o.seed);
  Json report = reportSkeleton("qt", paramsJson(o, false, false));
  report["samples"] = samples;
  int nChecked = 0, wChecked = 0;
  bool pass = true;
  while (nChecked < samples || wChecked < samples) {
    QVec y = {rng.rational(4, 3), rng.rational(4, 3)};
    if (y[0].isZero() && y[1].isZero()) continue;
    QMat v(2, QVec(2));
    if (nChecked < samples) {
      Rational r = rng.rational(4, 3), s = rng.rational(4, 3);
      v[0][0] = r * y[0] * y[0] + s;
      v[0][1] = v[1][0] = r * y[0] * y[1];
      v[1][1] = r * y[1] * y[1] + s;
      QtMembership m = lemmaQtMembership(y, v);
      pass = pass && m.inN && m.certificate;
      ++nChecked;
    } else {
      v[0][0] = rng.rational(4, 3);
      v[0][1] = v[1][0] = rng.rational(4, 3);
      v[1][1] = rng.rational(4, 3);
      QtMembership m = lemmaQtMembership(y, v);
      if (m.inN) continue;
      pass = pass && m.certificate;
      ++wChecked;
    }
  }
  report["n_samples_checked"] = nChecked;
  report["w_samples_checked"] = wChecked;
  report["certificates_hold"] = pass;

  // Worked example: y = (1, 0), v = 0.
  QtMembership ex = lemmaQtMembership({Rational(1), Rational(0)},
                                      {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}});
  report["example"] = Json::object({{"in_N", ex.inN},
                                    {"phi1", jsonScalar(ex.phi1)},
                                    {"phi2", jsonScalar(ex.phi2)},
                                    {"certificate", ex.certificate}});
  pass = pass && ex.inN && ex.certificate;
  return finish(report, o, pass, timer);
}

int runQr(const CommonOpts& o, int kmax) {
  Timer timer;
  QrSeriesReport r = qrSeries(kmax);
  Json report = reportSkeleton("qr", paramsJson(o, false, false));
  report["kmax"] = kmax;
  Json table = Json::object();
  for (int k = 0; k <= std::min(10, kmax); ++k) {
    table[std::to_string(k)] = Json::object(
        {{"c_over_pi", jsonRational(r.cOverPi[k])}, {"a_over_pi", jsonRational(r.aOverPi[k])}});
  }
  report["coefficients"] = table;
  report["recursion_verified"] = r.recursionVerified;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", r.radiusEstimate);
    report["radius_estimate"] = buf;
  }
  bool pass = r.recursionVerified && r.radiusEstimate > 0.95 && r.radiusEstimate < 1.05 &&
              r.cOverPi[2] == Rational(1) && r.cOverPi[4] == Rational(3, 4);
  return finish(report, o, pass, timer);
}

int runSigma(const CommonOpts& o, const std::string& tText) {
  Timer timer;
  Json report = reportSkeleton("sigma", paramsJson(o, false, false));
  report["t"] = tText;
  std::optional<Rational> t;
  if (tText != "irrational") t = Rational::fromString(tText);
  SigmaResult r = sigmaT(t);
  if (r.unbounded) report["sigma"] = "unbounded";
  else report["sigma"] = r.count.get_str();
  return finish(report, o, true, timer);
}

int runPi1(const CommonOpts& o, int n, int p, int q, int allUpTo) {
  Timer timer;
  Json report = reportSkeleton("pi1", paramsJson(o, false, false));
  if (allUpTo > 0) {
    Json table = Json::object();
    for (int nn = 3; nn <= allUpTo; ++nn)
      for (int pp = 0; pp < nn; ++pp)
        for (int qq = 0; pp + qq < nn; ++qq) {
          if (pp + qq == 0) continue;
          std::string key = std::to_string(nn) + "," + std::to_string(pp) + "," +
                            std::to_string(qq);
          table[key] = pi1Tube(nn, pp, qq);
        }
    report["table"] = table;
  } else {
    report["n"] = n;
    report["p"] = p;
    report["q"] = q;
    report["pi1"] = pi1Tube(n, p, q);
  }
  return finish(report, o, true, timer);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crtube: exact Lie-algebra and CR-geometry verification engine"};
  app.require_subcommand(1);

  CommonOpts o;
  app.add_flag("--timing", o.timing, "include wall time in the report (breaks byte-stability)");
  app.add_flag("--serial", o.serial, "run the data-parallel kernels in serial reference mode");

  auto addCommon = [&](CLI::App* cmd, bool surface, bool bounds) {
    if (surface) {
      cmd->add_option("--surface", o.surface, "built-in surface: Mt, M0, M1");
      cmd->add_option("--t", o.tText, "deformation parameter for Mt (rational p/q)");
      cmd->add_option("--germ", o.germText, "defining series in the expression language");
    }
    if (bounds) {
      cmd->add_option("--d", o.d, "field degree bound (>= 1)");
      cmd->add_option("--D", o.D, "truncation order (>= 2d + 2; default env CRTUBE_DEFAULT_D or 8)");
    }
    cmd->add_option("--seed", o.seed, "seed for sampled checks");
    cmd->add_option("-o,--output", o.output, "also write the report to this path");
  };

  auto* holDim = app.add_subcommand("hol-dim", "dimension and basis of the tangent field algebra");
  addCommon(holDim, true, true);

  auto* classifyCmd = app.add_subcommand("classify", "hol-dim plus Killing form and label");
  addCommon(classifyCmd, true, true);

  std::string fieldText = "zeta1", expectText, f1Text, f2Text;
  auto* tangencyCmd = app.add_subcommand("tangency", "tangency of a field to a surface");
  addCommon(tangencyCmd, true, true);
  tangencyCmd->add_option("--field", fieldText,
                          "field expression or name (zeta1, zeta2, izeta2, eta, chi, xi2, xi2i)");
  tangencyCmd->add_option("--expect", expectText, "expected verdict: tangent or residual");

  auto* bracketCmd = app.add_subcommand("bracket", "Lie bracket of two fields");
  addCommon(bracketCmd, true, false);
  bracketCmd->add_option("--f1", f1Text, "first field")->required();
  bracketCmd->add_option("--f2", f2Text, "second field")->required();
  bracketCmd->add_option("--expect", expectText, "expected bracket");

  std::string gradingTarget = "surface";
  int bound = 4;
  auto* gradingCmd = app.add_subcommand("grading", "weight-space decomposition");
  addCommon(gradingCmd, true, true);
  gradingCmd->add_option("--target", gradingTarget, "surface (default) or tube");
  gradingCmd->add_option("--bound", bound, "lattice scan bound");

  std::string z1Text = "0", z2Text = "0";
  auto* leviCmd = app.add_subcommand("levi", "Levi matrix at a point of the slice v = 0");
  addCommon(leviCmd, true, false);
  leviCmd->add_option("--z1", z1Text, "z1 value (scalar expression)");
  leviCmd->add_option("--z2", z2Text, "z2 value (scalar expression)");

  std::string mapId = "phi_oc";
  int pBlock = 1, kBlock = 1;
  auto* mapCmd = app.add_subcommand("verify-map", "exact verification of the model maps");
  addCommon(mapCmd, false, true);
  mapCmd->add_option("--map", mapId, "cayley, phi_oc or phi_ob")->required();
  mapCmd->add_option("--p", pBlock, "phi_ob block size p");
  mapCmd->add_option("--k", kBlock, "phi_ob block size k");

  int samples = 20;
  auto* tubeCmd = app.add_subcommand("tube-checks", "matrix-model identity suite");
  addCommon(tubeCmd, false, false);
  tubeCmd->add_option("--samples", samples, "number of sampled transformations");

  int qtSamples = 50;
  auto* qtCmd = app.add_subcommand("qt", "image certificates for the invariant map");
  addCommon(qtCmd, false, false);
  qtCmd->add_option("--samples", qtSamples, "sample count per class");

  int kmax = 2000;
  auto* qrCmd = app.add_subcommand("qr", "integral coefficient recursion and radius");
  addCommon(qrCmd, false, false);
  qrCmd->add_option("--kmax", kmax, "final index for the radius estimate");

  std::string sigmaText = "1";
  auto* sigmaCmd = app.add_subcommand("sigma", "indistinguishability count on the deformed tube");
  addCommon(sigmaCmd, false, false);
  sigmaCmd->add_option("--t", sigmaText, "rational p/q or 'irrational'")->required();

  int n = 3, p = 1, q = 1, allUpTo = 0;
  auto* pi1Cmd = app.add_subcommand("pi1", "fundamental group of the higher tubes");
  addCommon(pi1Cmd, false, false);
  pi1Cmd->add_option("--n", n, "matrix size");
  pi1Cmd->add_option("--p", p, "positive eigenvalues");
  pi1Cmd->add_option("--q", q, "negative eigenvalues");
  pi1Cmd->add_option("--all-up-to", allUpTo, "tabulate all cases with n <= value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (o.serial) execMode() = ExecMode::Serial;

  try {
    if (holDim->parsed()) return runHolDim(o, false);
    if (classifyCmd->parsed()) return runHolDim(o, true);
    if (tangencyCmd->parsed()) return runTangency(o, fieldText, expectText);
    if (bracketCmd->parsed()) return runBracket(o, f1Text, f2Text, expectText);
    if (gradingCmd->parsed()) return runGrading(o, gradingTarget == "tube" ? "tube" : "surface", bound);
    if (leviCmd->parsed()) return runLevi(o, z1Text, z2Text);
    if (mapCmd->parsed()) return runVerifyMap(o, mapId, pBlock, kBlock);
    if (tubeCmd->parsed()) return runTubeChecks(o, samples);
    if (qtCmd->parsed()) return runQt(o, qtSamples);
    if (qrCmd->parsed()) return runQr(o, kmax);
    if (sigmaCmd->parsed()) return runSigma(o, sigmaText);
    if (pi1Cmd->parsed()) return runPi1(o, n, p, q, allUpTo);
  } catch (const dsl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
