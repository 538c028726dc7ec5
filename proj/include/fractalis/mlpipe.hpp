#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fractalis::mlpipe {

using Matrix = std::vector<std::vector<double>>;

// rating > 5 is the high class; exactly 5 maps to low
std::vector<bool> binarize_labels(const std::vector<double>& ratings);

struct ScalerState {
  std::vector<double> mean;
  std::vector<double> std_dev;                 // floored to 1 for constant columns
  std::vector<std::size_t> constant_columns;   // columns that hit the floor
};

ScalerState fit_scaler(const Matrix& rows);
Matrix apply_scaler(const ScalerState& state, const Matrix& rows);
std::vector<double> apply_scaler_row(const ScalerState& state, const std::vector<double>& row);

struct SvmConfig {
  double C{1.0};
  double gamma{-1.0};  // <= 0 selects the "scale" heuristic 1/(d*var(X))
  double tolerance{1e-3};
  std::size_t max_iterations{100000};
  bool record_objective{false};
};

struct SvmModel {
  Matrix support_vectors;
  std::vector<double> dual_coef;  // alpha_i * y_i
  double bias{0.0};
  double gamma{1.0};
  double C{1.0};
  std::size_t iterations{0};
  std::vector<double> objective_trace;  // dual objective checkpoints, if recorded

  double decision(const std::vector<double>& row) const;
  bool predict(const std::vector<double>& row) const;
};

// RBF-kernel SVM trained by sequential minimal optimization with
// maximal-violating-pair selection. Deterministic for a fixed row order.
// Throws on single-class input and when the iteration cap is exceeded.
SvmModel train_svm(const Matrix& rows, const std::vector<bool>& labels, const SvmConfig& cfg = {});

enum class Protocol { subject_dependent, subject_independent };

Protocol protocol_from_name(const std::string& name);
std::string protocol_name(Protocol p);

struct CvConfig {
  Protocol protocol{Protocol::subject_dependent};
  std::size_t folds{5};
  SvmConfig svm;
  std::string label_name{"label"};
};

struct CvReport {
  Protocol protocol{Protocol::subject_dependent};
  std::string label_name;
  std::vector<double> fold_accuracy;      // per fold (independent) or per subject (dependent)
  std::vector<std::string> fold_id;       // fold index or subject id
  double mean_accuracy{0.0};
};

// Stratified per-class round-robin assignment of row indices to folds.
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<bool>& labels,
                                                       std::size_t folds);

// One evaluation step: scaler + SVM fitted on the training rows only.
struct FoldOutcome {
  double accuracy{0.0};
  ScalerState scaler;
  SvmModel model;
};

FoldOutcome run_fold(const Matrix& rows, const std::vector<bool>& labels,
                     const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& test_idx, const SvmConfig& cfg);

// Subject-dependent: stratified k-fold within each subject, the reported
// score is the grand mean of per-subject means. Subject-independent:
// grouped folds that exclude every trial of the held-out subjects from
// training.
CvReport cross_validate(const Matrix& rows, const std::vector<double>& ratings,
                        const std::vector<std::string>& subjects, const CvConfig& cfg);

}  // namespace fractalis::mlpipe
