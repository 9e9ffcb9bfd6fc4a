#ifndef WSNSTEG_STEGANALYSIS_HPP
#define WSNSTEG_STEGANALYSIS_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "wsnsteg/dctmodel.hpp"
#include "wsnsteg/imageio.hpp"
#include "wsnsteg/stegocodec.hpp"

namespace wsn::steganalysis {

// --- Calibrated DCT features -----------------------------------------------
//
// Layout (see README for the rationale):
//   [0,17)    global AC-coefficient histogram, values clamped to [-8,8]
//   [17,102)  per-mode histograms of the 5 lowest-frequency AC modes
//             (zigzag order: (0,1),(1,0),(2,0),(1,1),(0,2)), 17 bins each
//   [102,183) 9x9 co-occurrence of adjacent intra-block AC pairs
//             (horizontal + vertical neighbours, clamped to [-4,4])
//   [183]     mean absolute pixel step across 8x8 block boundaries
//   [184,368) the same 184 features minus those of a calibrated reference
//             (decompress, crop 4 px from left and top, re-transform)
// All histogram entries are normalized frequencies, so entries are O(1).
constexpr int kRawFeatureDim = 184;
constexpr int kFeatureDim = 2 * kRawFeatureDim;

std::vector<double> extract_features(const dctmodel::DctPlane& plane);

// Feature datasets as CSV: header, then one row per exemplar with a leading
// label column (0 = cover, 1 = stego).
void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& covers,
                       const std::vector<std::vector<double>>& stegos);
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> read_feature_csv(
    const std::filesystem::path& path);

// --- Fisher linear discriminant --------------------------------------------

struct FldClassifier {
  std::vector<double> weights;
  double bias = 0.0;  // classify as stego iff weights . x + bias > 0

  int classify(const std::vector<double>& x) const;
};

// weights = (S_w + lambda I)^-1 (mu_stego - mu_cover) with within-class
// scatter S_w and ridge lambda = 1e-6 trace(S_w)/d; bias places the decision
// threshold at the projected midpoint of the class means. Throws
// std::invalid_argument on fewer than two exemplars per class or when both
// classes are a single repeated point (zero scatter).
FldClassifier fld_train(const std::vector<std::vector<double>>& covers,
                        const std::vector<std::vector<double>>& stegos);

// --- Ensemble of FLDs on random subspaces ----------------------------------

struct BaseLearner {
  std::vector<int> subspace;  // sorted feature indices, size d_sub
  FldClassifier fld;          // trained on the projected bootstrap sample
  std::vector<std::uint8_t> in_bag;  // per training pair

  int classify(const std::vector<double>& x) const;  // x is full-dimensional
};

struct EnsembleParams {
  int learners = 100;
  int d_sub = 0;  // 0: ceil(d/4)
  std::uint64_t seed = 0;
};

struct EnsembleModel {
  int d = 0;
  int d_sub = 0;
  std::uint64_t seed = 0;
  std::size_t train_pairs = 0;
  std::vector<BaseLearner> learners;
};

// Each learner draws a seeded subspace of size d_sub and a seeded bootstrap
// sample of the cover/stego *pairs* (a pair is in-bag or out-of-bag as a
// unit), then trains an FLD. Deterministic given params.seed.
EnsembleModel train_ensemble(const std::vector<std::vector<double>>& covers,
                             const std::vector<std::vector<double>>& stegos,
                             const EnsembleParams& params);

// Fraction of learners voting stego, in [0,1] — the ROC score.
double ensemble_score(const EnsembleModel& model, const std::vector<double>& x);
// Majority vote; exact ties classify as stego.
int ensemble_classify(const EnsembleModel& model, const std::vector<double>& x);

// Out-of-bag error on the training pairs:
//   E = 1/(2N) sum_m [ B(cover_m) + 1 - B(stego_m) ]
// where B is the majority vote (1 = stego, ties -> stego) over only the
// learners holding pair m out-of-bag; pairs with no such learner are skipped
// and N adjusted. `use_learners` restricts the vote to the first L learners
// (-1: all), which yields the error-vs-ensemble-size curve from one model.
double oob_error(const EnsembleModel& model, const std::vector<std::vector<double>>& covers,
                 const std::vector<std::vector<double>>& stegos, int use_learners = -1);

// Same aggregation from precomputed per-pair votes in {0,1}; -1 marks a pair
// without an out-of-bag vote, and pairs with -1 on either side are skipped.
double oob_error_from_votes(const std::vector<int>& cover_votes,
                            const std::vector<int>& stego_votes);

// --- ROC --------------------------------------------------------------------

struct RocPoint {
  double threshold;  // classify stego iff score >= threshold
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1), both rates nondecreasing
  double auc = 0.0;              // trapezoidal area under the points
};

// Threshold sweep over all distinct scores, descending; scores shared by both
// classes step fpr and tpr simultaneously. Throws on empty input.
RocCurve roc_curve(const std::vector<double>& cover_scores,
                   const std::vector<double>& stego_scores);

// --- Classic spatial-domain LSB detectors ----------------------------------

// Mean over occupied LSB pairs (2k, 2k+1) of |count0-count1|/(count0+count1).
// Near 0 flags LSB-equalized (suspect) images.
double close_color_pairs_stat(const imageio::GrayImage& image);

// Embed a keyed random full-capacity test message and return the ratio of the
// close-pair statistic after/before. Clean images land far below 1 (the probe
// flattens a genuinely unbalanced histogram); images already carrying an LSB
// payload land near 1, since their statistic already sat at the randomized
// floor. A zero pre-embedding statistic degenerates to ratio 1 (maximally
// suspect).
double rqp_test(const imageio::GrayImage& image, stegocodec::StegoKey key);

// Detector scores oriented so that larger means more likely embedded, for ROC
// aggregation: the negated pair statistic, and the raw RQP ratio (suspicion
// grows with the ratio; values above 1 mean the pre-probe statistic was
// already at noise level).
double close_color_pairs_score(const imageio::GrayImage& image);
double rqp_score(const imageio::GrayImage& image, stegocodec::StegoKey key);

// Visual attack: map every pixel to 255 * (pixel mod 2).
imageio::GrayImage lsb_enhance(const imageio::GrayImage& image);

}  // namespace wsn::steganalysis

#endif
