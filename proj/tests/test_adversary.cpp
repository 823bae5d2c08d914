#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "qsdc/adversary.hpp"

using namespace qsdc;

namespace {

constexpr auto PhiP = BellOutcome::PhiPlus;
constexpr auto PhiM = BellOutcome::PhiMinus;
constexpr auto PsiP = BellOutcome::PsiPlus;
constexpr auto PsiM = BellOutcome::PsiMinus;

}  // namespace

TEST_CASE("Eve's candidate set has exactly four branches", "[adversary]") {
  // the announced pair (Phi+, Psi-) leaves the four listed possibilities
  const EveObservation obs{GhzLabel::Pp, GhzLabel::Pp, PhiP, PsiM};
  const auto candidates = eve_candidate_branches(obs);
  REQUIRE(candidates.size() == 4);
  const std::set<std::array<int, 3>> got = [&] {
    std::set<std::array<int, 3>> s;
    for (const auto& c : candidates)
      s.insert({static_cast<int>(c.alice), static_cast<int>(c.bob), static_cast<int>(c.charlie)});
    return s;
  }();
  const std::vector<BranchTriple> expected = {{PhiP, PhiM, PhiM},
                                              {PhiM, PhiM, PhiP},
                                              {PsiP, PsiM, PsiM},
                                              {PsiM, PsiM, PsiP}};
  for (const auto& e : expected)
    CHECK(got.count({static_cast<int>(e.alice), static_cast<int>(e.bob),
                     static_cast<int>(e.charlie)}) == 1);

  // every possible announcement on the (P+, P+) channel
  for (BellOutcome a : kBellOutcomes)
    for (BellOutcome b : kBellOutcomes)
      CHECK(eve_candidate_branches({GhzLabel::Pp, GhzLabel::Pp, a, b}).size() == 4);
}

TEST_CASE("the state guess succeeds at chance level 1/4", "[adversary]") {
  SessionConfig config;
  config.seed = 404;
  const AttackReport report = run_state_guess_attack(config, 20000);
  CHECK(std::abs(report.rate - 0.25) < 0.01);
  CHECK(report.trials == 20000);
  CHECK(report.successes == static_cast<std::uint64_t>(report.rate * 20000 + 0.5));

  // leaking Charlie's outcome pins the branch
  const AttackReport leaked = run_state_guess_attack(config, 2000, true);
  CHECK(leaked.rate == 1.0);
}

TEST_CASE("blind message guessing stays at chance level", "[adversary]") {
  SessionConfig config;
  config.seed = 505;
  const MessageGuessReport report = run_message_guess_attack(config, 20000);
  CHECK(report.alice.rate < 0.25 + 0.015);
  CHECK(report.alice.rate > 0.25 - 0.015);
  CHECK(report.bob.rate < 0.5 + 0.015);
  CHECK(report.bob.rate > 0.5 - 0.015);

  // with the schemes and Charlie's outcome, Eve decodes exactly
  const MessageGuessReport informed = run_message_guess_attack(config, 2000, true);
  CHECK(informed.alice.rate == 1.0);
  CHECK(informed.bob.rate == 1.0);

  const json j = report.to_json();
  CHECK(j.at("alice").contains("rate"));
  CHECK(j.at("alice").contains("ci95"));
  CHECK(j.at("bob").at("trials") == 20000);
}

TEST_CASE("ancilla coupling produces the predicted diagonal", "[adversary]") {
  // no tampering: the channel stays pure
  const DensityMatrix clean = apply_tamper(TamperModel::none(), make_ghz(GhzLabel::Pp));
  CHECK(clean.fidelity(make_ghz(GhzLabel::Pp)) > 1.0 - 1e-12);
  for (double s : rates_from_diagonal(twirl(clean).diagonal).s) CHECK(std::abs(s) < 1e-12);

  // coupling strength θ leaves p000 = (1+cosθ)/2 and p100 = (1-cosθ)/2
  for (int target = 0; target < 3; ++target) {
    for (double angle : {0.3, 0.9, 1.570796326794896619}) {
      const DensityMatrix rho =
          apply_tamper(TamperModel::ancilla_coupling(target, angle), make_ghz(GhzLabel::Pp));
      const GhzDiagonal d = twirl(rho).diagonal;
      const double c = std::cos(angle);
      CHECK(std::abs(d.p[static_cast<std::size_t>(ghz_bits_index(GhzLabel::Pp))] - (1 + c) / 2) <
            1e-12);
      CHECK(std::abs(d.p[static_cast<std::size_t>(ghz_bits_index(GhzLabel::Pm))] - (1 - c) / 2) <
            1e-12);
      for (GhzLabel g : {GhzLabel::Qp, GhzLabel::Qm, GhzLabel::Rp, GhzLabel::Rm, GhzLabel::Sp,
                         GhzLabel::Sm})
        CHECK(std::abs(d.p[static_cast<std::size_t>(ghz_bits_index(g))]) < 1e-12);
      CHECK(std::abs(rho.fidelity(make_ghz(GhzLabel::Pp)) - (1 + c) / 2) < 1e-12);
      // tampering costs yield
      const YieldReport y = yields(d);
      CHECK(y.d_h_prime < 1.0 - 1e-9);
      CHECK(channel_verdict(d, 1000).count < 1000);
    }
  }

  // mixed-state path agrees with the pure path
  const double angle = 0.7;
  const DensityMatrix via_pure =
      apply_tamper(TamperModel::ancilla_coupling(2, angle), make_ghz(GhzLabel::Pp));
  const DensityMatrix via_mixed = apply_tamper(TamperModel::ancilla_coupling(2, angle),
                                               density_from_pure(make_ghz(GhzLabel::Pp)));
  CHECK((via_pure.matrix() - via_mixed.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("state replacement substitutes the supplied matrix", "[adversary]") {
  const DensityMatrix junk{Matrix8(Matrix8::Identity() / 8.0)};
  const DensityMatrix out =
      apply_tamper(TamperModel::replacement_with(junk), make_ghz(GhzLabel::Pp));
  CHECK((out.matrix() - junk.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("every non-trivial tamper leaves a detectable stabilizer signature", "[adversary]") {
  std::vector<TamperModel> models;
  for (int target = 0; target < 3; ++target)
    for (double angle : {0.2, 0.5, 1.0, 1.570796326794896619})
      models.push_back(TamperModel::ancilla_coupling(target, angle));
  {
    Matrix8 mix = Matrix8::Zero();
    const Vector8 vp = to_vector8(make_ghz(GhzLabel::Pp));
    const Vector8 vq = to_vector8(make_ghz(GhzLabel::Qp));
    mix = 0.8 * (vp * vp.adjoint()) + 0.2 * (vq * vq.adjoint());
    models.push_back(TamperModel::replacement_with(DensityMatrix(mix)));
    Matrix8 depolarized = 0.9 * (vp * vp.adjoint()) + 0.1 * Matrix8::Identity() / 8.0;
    models.push_back(TamperModel::replacement_with(DensityMatrix(depolarized)));
  }

  std::uint64_t stream = 0;
  for (const TamperModel& model : models) {
    const DensityMatrix rho = apply_tamper(model, make_ghz(GhzLabel::Pp));
    REQUIRE(rho.fidelity(make_ghz(GhzLabel::Pp)) < 1.0 - 1e-9);

    // analytically: some exact rate is strictly positive
    const StabilizerRates exact = rates_from_diagonal(twirl(rho).diagonal);
    double max_exact = 0.0;
    for (double s : exact.s) max_exact = std::max(max_exact, s);
    CHECK(max_exact > 1e-12);

    // statistically: some estimate clears three standard errors
    Rng rng = Rng::derive(909, stream++);
    const EstimatedRates est = estimate_rates(twirl(rho).state, 10000, rng);
    bool detected = false;
    for (int k = 0; k < 7; ++k)
      if (est.rates.s[static_cast<std::size_t>(k)] >
          3.0 * est.half_width[static_cast<std::size_t>(k)])
        detected = true;
    CHECK(detected);
  }
}

TEST_CASE("tamper model validation", "[adversary]") {
  CHECK_THROWS_AS(apply_tamper(TamperModel::ancilla_coupling(3, 0.5), make_ghz(GhzLabel::Pp)),
                  std::invalid_argument);
  TamperModel missing;
  missing.kind = TamperModel::Kind::Replacement;
  CHECK_THROWS_AS(apply_tamper(missing, make_ghz(GhzLabel::Pp)), std::invalid_argument);
  TamperModel nan_angle = TamperModel::ancilla_coupling(0, std::nan(""));
  CHECK_THROWS_AS(apply_tamper(nan_angle, make_ghz(GhzLabel::Pp)), std::invalid_argument);
}
