// Copyright 2026 The ACAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "acav/core/error.hpp"
#include "acav/core/rng.hpp"
#include "acav/nn/model.hpp"
#include "acav/probe/experiment.hpp"
#include "acav/probe/metrics.hpp"
#include "acav/probe/reference.hpp"
#include "acav/probe/report.hpp"
#include "acav/synth/dataset.hpp"
#include "support/oracles.hpp"

using namespace acav;
using namespace acav::probe;
using synth::Label;

namespace {

// p_healthy = softmax(a, b)[0] and the hidden layer (index 1) equals (a, b)
// for non-negative inputs.
nn::Model identity_model() {
  nn::Model m({2}, {nn::LayerSpec::dense(2, 2), nn::LayerSpec::relu(), nn::LayerSpec::dense(2, 2),
                    nn::LayerSpec::softmax()});
  auto p = m.parameters();
  (*p[0])[0] = 1.0f;
  (*p[0])[3] = 1.0f;
  (*p[2])[0] = 1.0f;
  (*p[2])[3] = 1.0f;
  return m;
}

Tensor<float> point(float a, float b) { return Tensor<float>({2}, {a, b}); }

ActivationPair pair_of(std::vector<double> o, std::vector<double> a) { return {{0, std::move(o)}, {0, std::move(a)}}; }

AcavRow sample_row(double so, double sa, std::uint64_t seed) {
  AcavRow r;
  r.concept_name = "fatty_dots x1 medium";
  r.kinds = "fatty_dots";
  r.count = 1;
  r.scale = "medium";
  r.layer = "n-1";
  r.layer_index = 13;
  r.samples = 50;
  r.sim_original = so;
  r.sim_augmented = sa;
  r.abs_deviation = std::abs(so - sa);
  r.flip_rate = 0.2;
  r.literal_ratio = 0.25;
  r.angle_healthy = 10.0 + static_cast<double>(seed);
  r.angle_diseased = 40.0;
  (void)seed;
  return r;
}

AcavReport sample_report(std::uint64_t seed, const std::string& hash) {
  AcavReport rep;
  rep.seed = seed;
  rep.config_hash = hash;
  rep.rows.push_back(sample_row(0.864, 0.835, seed));
  auto second = sample_row(0.9, 0.7, seed);
  second.concept_name = "fatty_dots x3 medium";
  second.count = 3;
  second.literal_ratio = std::numeric_limits<double>::infinity();
  rep.rows.push_back(second);
  return rep;
}

struct Fixture {
  nn::Model model;
  synth::LabeledDataset pool;
  std::map<std::size_t, LayerReferences> refs;
  std::vector<ProbeLayer> layers;
};

// Untrained classifier, margin 0, references taken from pool activations.
// Cheap, but every code path of the experiment runs.
Fixture make_fixture() {
  Fixture f;
  f.model = nn::make_classifier(3, 64, 64, 21);
  synth::DatasetSpec spec;
  spec.scene = synth::SceneKind::fundus;
  spec.healthy_count = 12;
  spec.diseased_frequency = {{synth::ConceptKind::bleeding, 1.0}};
  spec.seed = 8;
  f.pool = synth::gen_dataset(spec);
  const std::vector<std::string> names = {"n-1", "n-2"};
  f.layers = probe_layers(f.model, names);
  for (const auto& l : f.layers) {
    LayerReferences lr;
    const auto a = f.model.forward_probed(imaging::to_tensor(f.pool.samples[0].image), l.index).activation.values;
    lr.healthy = {Label::healthy, l.index, a, 1};
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (i % 3 == 0) ? 1.0 : a[i];
    lr.diseased = {Label::diseased, l.index, d, 1};
    f.refs[l.index] = lr;
  }
  return f;
}

std::vector<ConceptConfig> sweep() {
  using synth::ConceptKind;
  return {{"none x0 medium", {ConceptKind::fatty_dots}, 0, synth::ScaleClass::medium, 1.0},
          {"fatty_dots x1 medium", {ConceptKind::fatty_dots}, 1, synth::ScaleClass::medium, 1.0},
          {"fatty_dots x3 medium", {ConceptKind::fatty_dots}, 3, synth::ScaleClass::medium, 1.0},
          {"combined x2 large", {ConceptKind::fatty_dots, ConceptKind::cotton_wool, ConceptKind::bleeding}, 2,
           synth::ScaleClass::large, 0.8}};
}

ExperimentOptions margin_zero() {
  ExperimentOptions o;
  o.margin = 0.0;
  o.seed = 77;
  o.placement = synth::placement_rule(synth::SceneKind::fundus);
  return o;
}

}  // namespace

TEST_SUITE("probe") {
  TEST_CASE("confidence gating") {
    CHECK(classify_confident(0.7, 0.2) == Decision::healthy);
    CHECK(classify_confident(0.5, 0.2) == Decision::abstain);
    CHECK(classify_confident(0.3, 0.2) == Decision::diseased);
    CHECK(classify_confident(0.6, 0.2) == Decision::abstain);
    CHECK(classify_confident(0.4, 0.2) == Decision::abstain);
    CHECK(classify_confident(0.51, 0.0) == Decision::healthy);
    CHECK_THROWS_AS(classify_confident(0.5, 0.5), ConfigError);
    CHECK_THROWS_AS(classify_confident(0.5, -0.1), ConfigError);
  }

  TEST_CASE("cosine angle closed forms") {
    const std::vector<double> x = {1, 0}, y = {0, 1}, d = {1, 1}, u = {0.3, -2.0, 5.0};
    CHECK(cosine_angle(u, u).cosine == doctest::Approx(1.0));
    CHECK(cosine_angle(u, u).degrees == doctest::Approx(0.0));
    CHECK(cosine_angle(x, y).cosine == 0.0);
    CHECK(cosine_angle(x, y).degrees == doctest::Approx(90.0));
    CHECK(std::abs(cosine_angle(x, d).degrees - 45.0) < 1e-9);
    const std::vector<double> zero = {0, 0}, three = {1, 2, 3};
    CHECK_THROWS_AS(cosine_angle(x, zero), UndefinedAngleError);
    CHECK_THROWS_AS(cosine_angle(x, three), DimensionError);
  }

  TEST_CASE("cosine is scale invariant and matches the oracle") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto u = testing::random_vector(16, s);
      const auto v = testing::random_vector(16, s + 1000);
      const double c = 0.001 + 100.0 * testing::random_vector(1, s + 2000, 0.0, 1.0)[0];
      std::vector<double> cu(u);
      for (auto& x : cu) x *= c;
      CHECK(std::abs(cosine_angle(cu, v).degrees - cosine_angle(u, v).degrees) < 1e-9);
      CHECK(std::abs(cosine_angle(u, v).cosine - testing::cosine(u, v)) < 1e-12);
    }
  }

  TEST_CASE("delta_v") {
    const std::vector<ActivationPair> same = {pair_of({1, 2}, {1, 2}), pair_of({-1, 0}, {-1, 0})};
    CHECK(delta_v(same) == 0.0);
    const std::vector<ActivationPair> one = {pair_of({1, 1}, {4, 5})};
    CHECK(std::abs(delta_v(one) - 5.0) < 1e-9);
    std::vector<ActivationPair> ten;
    std::vector<double> norms;
    for (std::uint64_t s = 0; s < 10; ++s) {
      ten.push_back(pair_of(testing::random_vector(64, s), testing::random_vector(64, s + 50)));
      norms.push_back(testing::euclidean(ten.back().original.values, ten.back().augmented.values));
    }
    CHECK(delta_v(ten) == doctest::Approx(testing::mean(norms)).epsilon(1e-12));
    CHECK(delta_v(ten) >= 0.0);
    const std::vector<ActivationPair> bad = {pair_of({1, 2}, {1, 2, 3})};
    CHECK_THROWS_AS(delta_v(bad), DimensionError);
  }

  TEST_CASE("similarity deviation") {
    const auto ref = testing::random_vector(8, 1);
    std::vector<ActivationPair> pairs;
    for (std::uint64_t s = 0; s < 5; ++s) pairs.push_back(pair_of(testing::random_vector(8, s + 10), testing::random_vector(8, s + 20)));
    const auto sd = similarity_deviation(ref, pairs);
    std::vector<double> so, sa;
    for (const auto& p : pairs) {
      so.push_back(testing::cosine(ref, p.original.values));
      sa.push_back(testing::cosine(ref, p.augmented.values));
    }
    CHECK(sd.mean_original == doctest::Approx(testing::mean(so)).epsilon(1e-12));
    CHECK(sd.mean_augmented == doctest::Approx(testing::mean(sa)).epsilon(1e-12));
    CHECK(std::abs(sd.deviation - std::abs(testing::mean(so) - testing::mean(sa))) < 1e-12);
    CHECK(sd.deviation == std::abs(sd.mean_original - sd.mean_augmented));

    std::vector<ActivationPair> swapped;
    for (const auto& p : pairs) swapped.push_back({p.augmented, p.original});
    const auto sw = similarity_deviation(ref, swapped);
    CHECK(sw.deviation == sd.deviation);
    CHECK(sw.mean_original == sd.mean_augmented);

    std::vector<ActivationPair> identity;
    for (const auto& p : pairs) identity.push_back({p.original, p.original});
    CHECK(similarity_deviation(ref, identity).deviation == 0.0);
  }

  TEST_CASE("table one fatty dots row") {
    AcavRow r = sample_row(0.864, 0.835, 0);
    CHECK(std::abs(r.abs_deviation - 0.029) < 1e-9);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", r.abs_deviation);
    CHECK(std::string(buf) == "0.03");
  }

  TEST_CASE("flip metrics") {
    using D = Decision;
    const std::vector<D> h10(10, D::healthy);
    std::vector<D> aug(10, D::diseased);
    aug[0] = aug[1] = D::healthy;
    const auto m = flip_metrics(h10, aug);
    CHECK(m.flip_rate == doctest::Approx(0.8));
    CHECK(m.literal_ratio == doctest::Approx(4.0));
    CHECK(m.flipped == 8);
    CHECK(m.preserved == 2);

    const auto none = flip_metrics(h10, h10);
    CHECK(none.flip_rate == 0.0);
    CHECK(none.literal_ratio == 0.0);

    const auto all = flip_metrics(h10, std::vector<D>(10, D::diseased));
    CHECK(all.flip_rate == 1.0);
    CHECK(std::isinf(all.literal_ratio));

    const std::vector<D> orig = {D::healthy, D::abstain, D::diseased, D::healthy};
    const std::vector<D> after = {D::abstain, D::healthy, D::healthy, D::diseased};
    const auto mixed = flip_metrics(orig, after);
    CHECK(mixed.total == 3);
    CHECK(mixed.original_abstained == 1);
    CHECK(mixed.augmented_abstained == 1);
    CHECK(mixed.flipped == 2);
    CHECK(mixed.flip_rate == doctest::Approx(2.0 / 3.0));

    const std::vector<D> abstained(3, D::abstain);
    CHECK_THROWS_AS(flip_metrics(abstained, abstained), NoDecisionError);
    CHECK_THROWS_AS(flip_metrics(h10, abstained), DimensionError);
  }

  TEST_CASE("literal ratio identity without abstentions") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + rng.below(40);
      std::vector<Decision> o(n), a(n);
      for (std::size_t i = 0; i < n; ++i) {
        o[i] = rng.below(2) ? Decision::healthy : Decision::diseased;
        a[i] = rng.below(2) ? Decision::healthy : Decision::diseased;
      }
      const auto m = flip_metrics(o, a);
      CHECK(m.flip_rate >= 0.0);
      CHECK(m.flip_rate <= 1.0);
      if (m.flip_rate < 1.0) CHECK(m.literal_ratio == doctest::Approx(m.flip_rate / (1.0 - m.flip_rate)));
    }
  }

  TEST_CASE("pattern entropy") {
    const std::vector<double> one = {1.0}, quarter = {0.25, 0.25, 0.25, 0.25}, half = {0.5, 0.5},
                              skew = {0.7, 0.2, 0.1}, with_zero = {0.5, 0.0, 0.5};
    CHECK(pattern_entropy(one) == 0.0);
    CHECK(std::abs(pattern_entropy(quarter) - std::log(4.0)) < 1e-12);
    CHECK(std::abs(pattern_entropy(half) - std::numbers::ln2) < 1e-12);
    CHECK(std::abs(pattern_entropy(skew) - testing::entropy(skew)) < 1e-12);
    CHECK(pattern_entropy(skew) == doctest::Approx(0.8018).epsilon(1e-4));
    CHECK(std::abs(pattern_entropy(with_zero) - std::numbers::ln2) < 1e-12);
    const std::vector<double> unnormalized = {0.5, 0.6}, negative = {1.5, -0.5};
    CHECK_THROWS_AS(pattern_entropy(unnormalized), NormalizationError);
    CHECK_THROWS_AS(pattern_entropy(negative), NormalizationError);
  }

  TEST_CASE("uniform proportions maximize entropy") {
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t c = 2 + rng.below(6);
      std::vector<double> p(c);
      double sum = 0.0;
      for (auto& v : p) sum += (v = rng.uniform());
      for (auto& v : p) v /= sum;
      double check = 0.0;
      for (double v : p) check += v;
      if (std::abs(check - 1.0) > 1e-9) continue;
      REQUIRE(pattern_entropy(p) <= std::log(static_cast<double>(c)) + 1e-9);
    }
  }

  TEST_CASE("reference vectors gate on correctness and confidence") {
    const auto m = identity_model();
    std::vector<Tensor<float>> xs = {point(3, 0)};
    std::vector<Label> ys = {Label::healthy};
    const auto single = reference_vector(m, xs, ys, Label::healthy, 1, 0.2);
    CHECK(single.count == 1);
    CHECK(single.values == std::vector<double>{3.0, 0.0});

    xs.push_back(point(3, 0));
    ys.push_back(Label::healthy);
    CHECK(reference_vector(m, xs, ys, Label::healthy, 1, 0.2).values == single.values);

    std::vector<Tensor<float>> ten;
    std::vector<Label> ten_labels;
    std::vector<double> sum(2, 0.0);
    for (int i = 0; i < 10; ++i) {
      const float a = 2.0f + 0.25f * static_cast<float>(i), b = 0.1f * static_cast<float>(i % 3);
      ten.push_back(point(a, b));
      ten_labels.push_back(Label::healthy);
      sum[0] += a;
      sum[1] += b;
    }
    const auto r10 = reference_vector(m, ten, ten_labels, Label::healthy, 1, 0.2);
    CHECK(r10.count == 10);
    CHECK(r10.values[0] == doctest::Approx(sum[0] / 10).epsilon(1e-12));
    CHECK(r10.values[1] == doctest::Approx(sum[1] / 10).epsilon(1e-12));

    auto polluted = ten;
    auto polluted_labels = ten_labels;
    for (int i = 0; i < 5; ++i) {
      polluted.push_back(point(0, 4));  // confidently diseased, labelled healthy
      polluted_labels.push_back(Label::healthy);
      polluted.push_back(point(1, 1));  // abstains
      polluted_labels.push_back(Label::healthy);
    }
    const auto rp = reference_vector(m, polluted, polluted_labels, Label::healthy, 1, 0.2);
    CHECK(rp.values == r10.values);
    CHECK(rp.count == 10);

    CHECK_THROWS_AS(reference_vector(m, ten, ten_labels, Label::diseased, 1, 0.2), EmptyReferenceError);
  }

  TEST_CASE("references for several layers at once") {
    const auto m = identity_model();
    const std::vector<Tensor<float>> xs = {point(3, 0), point(0, 3), point(2, 0)};
    const std::vector<Label> ys = {Label::healthy, Label::diseased, Label::healthy};
    const std::vector<std::size_t> layers = {1, 3};
    const auto refs = build_references(m, xs, ys, layers, 0.2);
    REQUIRE(refs.size() == 2);
    CHECK(refs.at(1).healthy.values == std::vector<double>{2.5, 0.0});
    CHECK(refs.at(1).diseased.values == std::vector<double>{0.0, 3.0});
    CHECK(refs.at(3).diseased.count == 1);
  }

  TEST_CASE("probe layer names") {
    const auto m = nn::make_classifier(3, 64, 64, 1);
    const std::vector<std::string> names = {"n-1", "n-2"};
    const auto layers = probe_layers(m, names);
    REQUIRE(layers.size() == 2);
    CHECK(layers[0].index == m.penultimate_index());
    CHECK(layers[1].index == m.hidden_probe_index(2));
    const std::vector<std::string> bad = {"n-9"};
    CHECK_THROWS_AS(probe_layers(m, bad), ProbeError);
    const std::vector<std::string> junk = {"last"};
    CHECK_THROWS_AS(probe_layers(m, junk), ConfigError);
  }

  TEST_CASE("augmentation only touches pattern footprints") {
    const auto f = make_fixture();
    const auto& s = f.pool.samples[1];
    const auto configs = sweep();
    CHECK(augment(s.image, s.mask, configs[0], 5, margin_zero()) == s.image);
    const auto once = augment(s.image, s.mask, configs[1], 5, margin_zero());
    CHECK(once != s.image);
    CHECK(augment(s.image, s.mask, configs[1], 5, margin_zero()) == once);
    for (float v : augment(s.image, s.mask, configs[3], 5, margin_zero()).pixels) REQUIRE((v >= 0.0f && v <= 1.0f));
  }

  TEST_CASE("concept experiment rows") {
    const auto f = make_fixture();
    const auto configs = sweep();
    const auto rep = run_concept_experiment(f.model, f.pool.samples, f.refs, configs, f.layers, margin_zero());
    REQUIRE(rep.rows.size() == configs.size() * f.layers.size());
    CHECK(rep.pool_size == 12);
    CHECK(rep.eligible > 0);
    for (const auto& r : rep.rows) {
      CHECK(std::abs(r.abs_deviation - std::abs(r.sim_original - r.sim_augmented)) < 1e-9);
      CHECK(r.flip_rate >= 0.0);
      CHECK(r.flip_rate <= 1.0);
      CHECK(r.samples == rep.eligible);
      if (r.count == 0) {
        CHECK(r.abs_deviation == 0.0);
        CHECK(r.delta_v == 0.0);
        CHECK(r.flip_rate == 0.0);
        CHECK(r.angle_healthy == r.angle_original_healthy);
        CHECK(r.angle_diseased == r.angle_original_diseased);
      }
    }
    CHECK(rep.rows[0].concept_name == "none x0 medium");
    CHECK(rep.rows[0].layer == "n-1");
    CHECK(rep.rows[1].layer == "n-2");
    CHECK(rep.rows.back().kinds == "fatty_dots+cotton_wool+bleeding");
  }

  TEST_CASE("concept experiment is independent of the thread count") {
    const auto f = make_fixture();
    const auto configs = sweep();
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = report_csv(run_concept_experiment(f.model, f.pool.samples, f.refs, configs, f.layers, margin_zero()));
    omp_set_num_threads(3);
    const auto b = report_csv(run_concept_experiment(f.model, f.pool.samples, f.refs, configs, f.layers, margin_zero()));
    omp_set_num_threads(saved);
    CHECK(a == b);
  }

  TEST_CASE("report csv round trip") {
    const auto rep = sample_report(4, "abcdef0123456789");
    const auto csv = report_csv(rep);
    const auto t = parse_report_csv(csv);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][t.column("concept")] == "fatty_dots x1 medium");
    CHECK(std::stod(t.rows[0][t.column("sim_original")]) == 0.864);
    CHECK(std::stod(t.rows[0][t.column("abs_deviation")]) == std::abs(0.864 - 0.835));
    CHECK(t.rows[1][t.column("literal_ratio")] == "inf");
    CHECK(t.rows[0][t.column("config_hash")] == "abcdef0123456789");
    CHECK(t.rows[0][t.column("seed")] == "4");
    CHECK_THROWS_AS(t.column("nope"), MergeError);
  }

  TEST_CASE("markdown layout") {
    const auto md = report_markdown(sample_report(1, "h"));
    CHECK(md.find("Average Norm Vector Original Image") != std::string::npos);
    CHECK(md.find("Average Norm Vector Augmented Image") != std::string::npos);
    CHECK(md.find("Average Absolute Deviation") != std::string::npos);
    CHECK(md.find("| fatty_dots x1 medium | n-1 | 0.864 | 0.835 | 0.03 |") != std::string::npos);
    CHECK(md.find("Angle (degrees)") != std::string::npos);
    const auto footer = report_footer_json(sample_report(1, "h"));
    CHECK(footer.find("\"entropy_base\"") != std::string::npos);
  }

  TEST_CASE("merging reports") {
    const auto a = parse_report_csv(report_csv(sample_report(1, "aaaa1111")));
    const auto self = merge_reports({a, a});
    CHECK(self.runs == 1);
    CHECK(self.merged_csv == merge_reports({a}).merged_csv);

    const auto b = parse_report_csv(report_csv(sample_report(2, "aaaa1111")));
    const auto two = merge_reports({a, b});
    CHECK(two.runs == 2);
    CHECK(two.merged_csv.find("abs_deviation@s1") != std::string::npos);
    CHECK(two.merged_csv.find("abs_deviation@s2") != std::string::npos);
    const auto lines = std::count(two.merged_csv.begin(), two.merged_csv.end(), '\n');
    CHECK(lines == 3);
    CHECK(two.deviation_vs_count_csv.find("fatty_dots,n-1,s1,1,") != std::string::npos);
    CHECK(two.deviation_vs_count_csv.find("fatty_dots,n-1,s1,3,") != std::string::npos);

    auto bumped = report_csv(sample_report(1, "x"));
    const auto pos = bumped.find("\n1,");
    REQUIRE(pos != std::string::npos);
    bumped[pos + 1] = '2';
    CHECK_THROWS_AS(parse_report_csv(bumped), MergeError);
    CHECK_THROWS_AS(merge_reports({}), MergeError);
  }

  TEST_CASE("angle series are ordered by scale") {
    AcavReport rep;
    rep.seed = 3;
    rep.config_hash = "h";
    const char* scales[] = {"large", "small", "medium"};
    for (int i = 0; i < 3; ++i) {
      auto r = sample_row(0.9, 0.8, 0);
      r.kinds = "tumor";
      r.scale = scales[i];
      r.concept_name = std::string("tumor x1 ") + scales[i];
      r.angle_diseased = 30.0 - 10.0 * i;
      rep.rows.push_back(r);
    }
    const auto merged = merge_reports({parse_report_csv(report_csv(rep))});
    const auto s = merged.angle_vs_scale_csv.find("tumor,n-1,s3,0,small");
    const auto m = merged.angle_vs_scale_csv.find("tumor,n-1,s3,1,medium");
    const auto l = merged.angle_vs_scale_csv.find("tumor,n-1,s3,2,large");
    CHECK(s < m);
    CHECK(m < l);
    CHECK(l != std::string::npos);
  }
}
