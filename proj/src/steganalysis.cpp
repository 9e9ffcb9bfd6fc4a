#include "wsnsteg/steganalysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wsnsteg/rng.hpp"

namespace wsn::steganalysis {

namespace {

constexpr std::uint64_t kLearnerTag = rng::tag("ensemble.learner");
constexpr std::uint64_t kSubspaceTag = rng::tag("ensemble.subspace");
constexpr std::uint64_t kBootstrapTag = rng::tag("ensemble.bootstrap");
constexpr std::uint64_t kRqpMessageTag = rng::tag("rqp.message");
constexpr std::uint64_t kRqpEmbedTag = rng::tag("rqp.embed");

constexpr int kModes[5][2] = {{0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}};

int clamp_bin(std::int32_t v, int radius) {
  return static_cast<int>(std::clamp<std::int32_t>(v, -radius, radius)) + radius;
}

// The 184 uncalibrated features of one plane; `pixels` is its decompression.
std::vector<double> raw_features(const dctmodel::DctPlane& plane,
                                 const imageio::GrayImage& pixels) {
  std::vector<double> f(kRawFeatureDim, 0.0);
  double* ghist = f.data();        // 17
  double* mhist = f.data() + 17;   // 5 x 17
  double* cooc = f.data() + 102;   // 9 x 9

  for (int br = 0; br < plane.block_rows; ++br)
    for (int bc = 0; bc < plane.block_cols; ++bc) {
      for (int i = 0; i < dctmodel::kBlockSize; ++i)
        for (int j = 0; j < dctmodel::kBlockSize; ++j) {
          if (i == 0 && j == 0) continue;
          ghist[clamp_bin(plane.at(br, bc, i, j), 8)] += 1.0;
        }
      for (int m = 0; m < 5; ++m)
        mhist[m * 17 + clamp_bin(plane.at(br, bc, kModes[m][0], kModes[m][1]), 8)] += 1.0;
      for (int i = 0; i < dctmodel::kBlockSize; ++i)
        for (int j = 0; j + 1 < dctmodel::kBlockSize; ++j) {
          if (i == 0 && j == 0) continue;  // pair would include the DC slot
          cooc[clamp_bin(plane.at(br, bc, i, j), 4) * 9 +
               clamp_bin(plane.at(br, bc, i, j + 1), 4)] += 1.0;
        }
      for (int i = 0; i + 1 < dctmodel::kBlockSize; ++i)
        for (int j = 0; j < dctmodel::kBlockSize; ++j) {
          if (i == 0 && j == 0) continue;
          cooc[clamp_bin(plane.at(br, bc, i, j), 4) * 9 +
               clamp_bin(plane.at(br, bc, i + 1, j), 4)] += 1.0;
        }
    }

  const double blocks = static_cast<double>(plane.block_count());
  if (blocks > 0) {
    for (int b = 0; b < 17; ++b) ghist[b] /= blocks * 63.0;
    for (int b = 0; b < 85; ++b) mhist[b] /= blocks;
    for (int b = 0; b < 81; ++b) cooc[b] /= blocks * 110.0;
  }

  double acc = 0.0;
  std::int64_t steps = 0;
  for (int y = 0; y < pixels.height; ++y)
    for (int x = dctmodel::kBlockSize; x < pixels.width; x += dctmodel::kBlockSize) {
      acc += std::abs(static_cast<int>(pixels.at(x, y)) - pixels.at(x - 1, y));
      ++steps;
    }
  for (int y = dctmodel::kBlockSize; y < pixels.height; y += dctmodel::kBlockSize)
    for (int x = 0; x < pixels.width; ++x) {
      acc += std::abs(static_cast<int>(pixels.at(x, y)) - pixels.at(x, y - 1));
      ++steps;
    }
  f[183] = steps > 0 ? acc / static_cast<double>(steps) : 0.0;
  return f;
}

}  // namespace

std::vector<double> extract_features(const dctmodel::DctPlane& plane) {
  imageio::GrayImage img = dctmodel::inverse(plane);
  std::vector<double> raw = raw_features(plane, img);

  std::vector<double> ref;
  if (img.width > 4 && img.height > 4) {
    imageio::GrayImage cropped;
    cropped.width = img.width - 4;
    cropped.height = img.height - 4;
    cropped.pixels.resize(static_cast<std::size_t>(cropped.width) * cropped.height);
    for (int y = 0; y < cropped.height; ++y)
      for (int x = 0; x < cropped.width; ++x) cropped.at(x, y) = img.at(x + 4, y + 4);
    dctmodel::DctPlane ref_plane = dctmodel::forward(cropped, plane.quality);
    ref = raw_features(ref_plane, dctmodel::inverse(ref_plane));
  } else {
    ref = raw;  // too small to calibrate; differences vanish
  }

  raw.reserve(kFeatureDim);
  for (int i = 0; i < kRawFeatureDim; ++i) raw.push_back(raw[i] - ref[i]);
  return raw;
}

void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& covers,
                       const std::vector<std::vector<double>>& stegos) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  const std::size_t d = covers.empty() ? (stegos.empty() ? 0 : stegos[0].size()) : covers[0].size();
  out << "label";
  for (std::size_t i = 0; i < d; ++i) out << ",f" << i;
  out << "\n";
  char buf[32];
  auto row = [&](int label, const std::vector<double>& v) {
    if (v.size() != d) throw std::invalid_argument("feature rows have mixed dimensions");
    out << label;
    for (double x : v) {
      std::snprintf(buf, sizeof buf, ",%.17g", x);
      out << buf;
    }
    out << "\n";
  };
  for (const auto& v : covers) row(0, v);
  for (const auto& v : stegos) row(1, v);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> read_feature_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty feature file: " + path.string());
  std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    int label = -1;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (label < 0)
        label = std::stoi(cell);
      else
        row.push_back(std::stod(cell));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (label == 0)
      out.first.push_back(std::move(row));
    else if (label == 1)
      out.second.push_back(std::move(row));
    else
      throw std::runtime_error("bad label in feature file: " + path.string());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fisher linear discriminant

int FldClassifier::classify(const std::vector<double>& x) const {
  double s = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * x[i];
  return s > 0.0 ? 1 : 0;
}

FldClassifier fld_train(const std::vector<std::vector<double>>& covers,
                        const std::vector<std::vector<double>>& stegos) {
  if (covers.size() < 2 || stegos.size() < 2)
    throw std::invalid_argument("fld_train: need at least two exemplars per class");
  const Eigen::Index d = static_cast<Eigen::Index>(covers[0].size());

  auto to_matrix = [d](const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), d);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != d)
        throw std::invalid_argument("fld_train: mixed feature dimensions");
      m.row(r) = Eigen::Map<const Eigen::VectorXd>(rows[r].data(), d);
    }
    return m;
  };
  Eigen::MatrixXd xc = to_matrix(covers), xs = to_matrix(stegos);
  Eigen::VectorXd mu_c = xc.colwise().mean(), mu_s = xs.colwise().mean();
  xc.rowwise() -= mu_c.transpose();
  xs.rowwise() -= mu_s.transpose();
  Eigen::MatrixXd sw = xc.transpose() * xc + xs.transpose() * xs;

  const double tr = sw.trace();
  if (!(tr > 0.0))
    throw std::invalid_argument("fld_train: zero within-class scatter (degenerate data)");
  const double lambda = 1e-6 * tr / static_cast<double>(d);
  sw.diagonal().array() += lambda;

  Eigen::VectorXd w = sw.ldlt().solve(mu_s - mu_c);
  FldClassifier out;
  out.weights.assign(w.data(), w.data() + d);
  out.bias = -0.5 * w.dot(mu_s + mu_c);
  return out;
}

// ---------------------------------------------------------------------------
// Ensemble

int BaseLearner::classify(const std::vector<double>& x) const {
  double s = fld.bias;
  for (std::size_t i = 0; i < subspace.size(); ++i)
    s += fld.weights[i] * x[static_cast<std::size_t>(subspace[i])];
  return s > 0.0 ? 1 : 0;
}

EnsembleModel train_ensemble(const std::vector<std::vector<double>>& covers,
                             const std::vector<std::vector<double>>& stegos,
                             const EnsembleParams& params) {
  if (params.learners < 1) throw std::invalid_argument("train_ensemble: need at least 1 learner");
  if (covers.size() != stegos.size())
    throw std::invalid_argument("train_ensemble: cover/stego sets must be paired");
  const std::size_t pairs = covers.size();
  if (pairs < 2) throw std::invalid_argument("train_ensemble: need at least 2 pairs");
  const int d = static_cast<int>(covers[0].size());
  const int d_sub = params.d_sub > 0 ? params.d_sub : (d + 3) / 4;
  if (d_sub > d) throw std::invalid_argument("train_ensemble: d_sub exceeds feature dimension");

  EnsembleModel model;
  model.d = d;
  model.d_sub = d_sub;
  model.seed = params.seed;
  model.train_pairs = pairs;
  model.learners.resize(static_cast<std::size_t>(params.learners));

  const std::uint64_t base = rng::seed_combine(params.seed, kLearnerTag);
  std::vector<int> all_indices(static_cast<std::size_t>(d));
  std::iota(all_indices.begin(), all_indices.end(), 0);

  for (std::size_t l = 0; l < model.learners.size(); ++l) {
    BaseLearner& learner = model.learners[l];
    const std::uint64_t seed_l = rng::seed_combine(base, l);

    std::vector<int> perm = all_indices;
    rng::SplitMix64 sub_gen(rng::seed_combine(seed_l, kSubspaceTag));
    sub_gen.shuffle(perm);
    learner.subspace.assign(perm.begin(), perm.begin() + d_sub);
    std::sort(learner.subspace.begin(), learner.subspace.end());

    rng::SplitMix64 boot_gen(rng::seed_combine(seed_l, kBootstrapTag));
    learner.in_bag.assign(pairs, 0);
    std::vector<std::size_t> bag(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
      bag[i] = static_cast<std::size_t>(boot_gen.below(pairs));
      learner.in_bag[bag[i]] = 1;
    }

    auto project = [&](const std::vector<std::vector<double>>& rows) {
      std::vector<std::vector<double>> out(pairs, std::vector<double>(d_sub));
      for (std::size_t i = 0; i < pairs; ++i)
        for (int k = 0; k < d_sub; ++k)
          out[i][k] = rows[bag[i]][static_cast<std::size_t>(learner.subspace[k])];
      return out;
    };
    learner.fld = fld_train(project(covers), project(stegos));
  }
  return model;
}

double ensemble_score(const EnsembleModel& model, const std::vector<double>& x) {
  int votes = 0;
  for (const BaseLearner& l : model.learners) votes += l.classify(x);
  return static_cast<double>(votes) / static_cast<double>(model.learners.size());
}

int ensemble_classify(const EnsembleModel& model, const std::vector<double>& x) {
  int votes = 0;
  for (const BaseLearner& l : model.learners) votes += l.classify(x);
  return 2 * votes >= static_cast<int>(model.learners.size()) ? 1 : 0;
}

double oob_error(const EnsembleModel& model, const std::vector<std::vector<double>>& covers,
                 const std::vector<std::vector<double>>& stegos, int use_learners) {
  if (covers.size() != model.train_pairs || stegos.size() != model.train_pairs)
    throw std::invalid_argument("oob_error: dataset does not match the model's training pairs");
  std::size_t l_use = model.learners.size();
  if (use_learners >= 0) l_use = std::min<std::size_t>(l_use, static_cast<std::size_t>(use_learners));
  if (l_use == 0) throw std::invalid_argument("oob_error: no learners selected");

  std::vector<int> cover_votes(model.train_pairs, -1), stego_votes(model.train_pairs, -1);
  for (std::size_t m = 0; m < model.train_pairs; ++m) {
    int n_oob = 0, vc = 0, vs = 0;
    for (std::size_t l = 0; l < l_use; ++l) {
      if (model.learners[l].in_bag[m]) continue;
      ++n_oob;
      vc += model.learners[l].classify(covers[m]);
      vs += model.learners[l].classify(stegos[m]);
    }
    if (n_oob == 0) continue;
    cover_votes[m] = 2 * vc >= n_oob ? 1 : 0;
    stego_votes[m] = 2 * vs >= n_oob ? 1 : 0;
  }
  return oob_error_from_votes(cover_votes, stego_votes);
}

double oob_error_from_votes(const std::vector<int>& cover_votes,
                            const std::vector<int>& stego_votes) {
  if (cover_votes.size() != stego_votes.size())
    throw std::invalid_argument("oob_error_from_votes: vote lists must be paired");
  std::int64_t acc = 0, pairs = 0;
  for (std::size_t m = 0; m < cover_votes.size(); ++m) {
    if (cover_votes[m] < 0 || stego_votes[m] < 0) continue;
    acc += cover_votes[m] + (1 - stego_votes[m]);
    ++pairs;
  }
  if (pairs == 0) throw std::invalid_argument("oob_error_from_votes: every pair was skipped");
  return static_cast<double>(acc) / (2.0 * static_cast<double>(pairs));
}

// ---------------------------------------------------------------------------
// ROC

RocCurve roc_curve(const std::vector<double>& cover_scores,
                   const std::vector<double>& stego_scores) {
  if (cover_scores.empty() || stego_scores.empty())
    throw std::invalid_argument("roc_curve: empty score list");

  std::vector<double> thresholds;
  thresholds.reserve(cover_scores.size() + stego_scores.size());
  thresholds.insert(thresholds.end(), cover_scores.begin(), cover_scores.end());
  thresholds.insert(thresholds.end(), stego_scores.begin(), stego_scores.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<double> cs = cover_scores, ss = stego_scores;
  std::sort(cs.begin(), cs.end(), std::greater<>());
  std::sort(ss.begin(), ss.end(), std::greater<>());

  RocCurve curve;
  curve.points.push_back(RocPoint{std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t ci = 0, si = 0;
  for (double t : thresholds) {
    while (ci < cs.size() && cs[ci] >= t) ++ci;
    while (si < ss.size() && ss[si] >= t) ++si;
    curve.points.push_back(RocPoint{t, static_cast<double>(ci) / cs.size(),
                                    static_cast<double>(si) / ss.size()});
  }

  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Classic detectors

double close_color_pairs_stat(const imageio::GrayImage& image) {
  std::int64_t counts[256] = {};
  for (std::uint8_t p : image.pixels) ++counts[p];
  double acc = 0.0;
  int occupied = 0;
  for (int k = 0; k < 128; ++k) {
    const std::int64_t c0 = counts[2 * k], c1 = counts[2 * k + 1];
    if (c0 + c1 == 0) continue;
    acc += static_cast<double>(std::abs(c0 - c1)) / static_cast<double>(c0 + c1);
    ++occupied;
  }
  return occupied > 0 ? acc / occupied : 0.0;
}

double rqp_test(const imageio::GrayImage& image, stegocodec::StegoKey key) {
  const double r1 = close_color_pairs_stat(image);
  // Full-capacity probe: it drives the pair statistic of any image down to
  // its randomized floor, so r2/r1 is far below 1 for genuinely unbalanced
  // (clean) images and near 1 when r1 already sat at that floor.
  const std::size_t test_bits = std::max<std::size_t>(image.pixels.size(), 1);
  rng::SplitMix64 gen(rng::seed_combine(key.value, kRqpMessageTag));
  stegocodec::BitVec message(test_bits);
  for (auto& b : message) b = static_cast<std::uint8_t>(gen.next() & 1);
  imageio::GrayImage probed = stegocodec::lsb_replace_embed(
      image, message, stegocodec::StegoKey{rng::seed_combine(key.value, kRqpEmbedTag)});
  const double r2 = close_color_pairs_stat(probed);
  if (r1 == 0.0) return 1.0;  // already perfectly equalized
  return r2 / r1;
}

double close_color_pairs_score(const imageio::GrayImage& image) {
  return -close_color_pairs_stat(image);
}

double rqp_score(const imageio::GrayImage& image, stegocodec::StegoKey key) {
  // Suspicion grows monotonically with the ratio: clean images land well
  // below 1, embedded ones scatter around 1 (a tiny r1 can push the ratio
  // above 1, which is just as suspect).
  return rqp_test(image, key);
}

imageio::GrayImage lsb_enhance(const imageio::GrayImage& image) {
  imageio::GrayImage out = image;
  for (auto& p : out.pixels) p = static_cast<std::uint8_t>((p & 1) * 255);
  return out;
}

}  // namespace wsn::steganalysis
