#include "fractalis/mlpipe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace fractalis::mlpipe {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double scale_gamma(const Matrix& rows) {
  // 1 / (d * var(all entries))
  const std::size_t d = rows.front().size();
  double mean = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    for (double v : r) {
      mean += v;
      ++count;
    }
  }
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (const auto& r : rows) {
    for (double v : r) var += (v - mean) * (v - mean);
  }
  var /= static_cast<double>(count);
  if (!(var > 0.0)) var = 1.0;
  return 1.0 / (static_cast<double>(d) * var);
}

Matrix gather_rows(const Matrix& rows, const std::vector<std::size_t>& idx) {
  Matrix out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(rows[i]);
  return out;
}

}  // namespace

std::vector<bool> binarize_labels(const std::vector<double>& ratings) {
  std::vector<bool> out;
  out.reserve(ratings.size());
  for (double r : ratings) {
    if (!(r >= 1.0 && r <= 9.0)) {
      throw std::invalid_argument("binarize_labels: rating outside [1,9]");
    }
    out.push_back(r > 5.0);
  }
  return out;
}

ScalerState fit_scaler(const Matrix& rows) {
  if (rows.size() < 2) throw std::invalid_argument("fit_scaler: need at least 2 rows");
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("fit_scaler: ragged rows");
  }

  ScalerState state;
  state.mean.assign(d, 0.0);
  state.std_dev.assign(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) state.mean[j] += r[j];
  }
  for (std::size_t j = 0; j < d; ++j) state.mean[j] /= static_cast<double>(rows.size());
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      const double dlt = r[j] - state.mean[j];
      state.std_dev[j] += dlt * dlt;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    state.std_dev[j] = std::sqrt(state.std_dev[j] / static_cast<double>(rows.size()));
    if (state.std_dev[j] <= 0.0) {
      state.std_dev[j] = 1.0;  // constant column passes through unchanged
      state.constant_columns.push_back(j);
    }
  }
  return state;
}

std::vector<double> apply_scaler_row(const ScalerState& state, const std::vector<double>& row) {
  if (row.size() != state.mean.size()) {
    throw std::invalid_argument("apply_scaler: row dimension mismatch");
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = (row[j] - state.mean[j]) / state.std_dev[j];
  }
  return out;
}

Matrix apply_scaler(const ScalerState& state, const Matrix& rows) {
  Matrix out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply_scaler_row(state, r));
  return out;
}

double SvmModel::decision(const std::vector<double>& row) const {
  double acc = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    acc += dual_coef[i] * std::exp(-gamma * squared_distance(support_vectors[i], row));
  }
  return acc;
}

bool SvmModel::predict(const std::vector<double>& row) const { return decision(row) > 0.0; }

SvmModel train_svm(const Matrix& rows, const std::vector<bool>& labels, const SvmConfig& cfg) {
  const std::size_t n = rows.size();
  if (n < 2 || labels.size() != n) {
    throw std::invalid_argument("train_svm: need >= 2 labeled rows");
  }
  bool has_pos = false, has_neg = false;
  for (bool b : labels) (b ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw std::invalid_argument("train_svm: single-class input");

  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : scale_gamma(rows);
  const double C = cfg.C;

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] ? 1.0 : -1.0;

  // full RBF Gram matrix (problem sizes here are modest)
  std::vector<std::vector<double>> K(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    K[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      K[i][j] = K[j][i] = std::exp(-gamma * squared_distance(rows[i], rows[j]));
    }
  }

  // minimize 1/2 a'Qa - e'a, Q_ij = y_i y_j K_ij, s.t. y'a = 0, 0 <= a <= C
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // G_i = (Q a)_i - 1

  const auto in_up = [&](std::size_t t) {
    return (y[t] > 0.0 && alpha[t] < C) || (y[t] < 0.0 && alpha[t] > 0.0);
  };
  const auto in_low = [&](std::size_t t) {
    return (y[t] < 0.0 && alpha[t] < C) || (y[t] > 0.0 && alpha[t] > 0.0);
  };

  SvmModel model;
  model.gamma = gamma;
  model.C = C;

  std::size_t iter = 0;
  double violation_gap = 0.0;
  for (;; ++iter) {
    if (iter >= cfg.max_iterations) {
      throw std::runtime_error("train_svm: SMO failed to converge within iteration cap");
    }

    // maximal violating pair
    double up_best = -1e300, low_best = 1e300;
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > up_best) {
        up_best = v;
        i = t;
      }
      if (in_low(t) && v < low_best) {
        low_best = v;
        j = t;
      }
    }
    violation_gap = up_best - low_best;
    if (i == n || j == n || violation_gap <= cfg.tolerance) break;

    double quad = K[i][i] + K[j][j] - 2.0 * K[i][j];
    if (quad <= 0.0) quad = 1e-12;
    double delta = violation_gap / quad;

    // clip so both multipliers stay inside the box
    const double di_max = y[i] > 0.0 ? C - alpha[i] : alpha[i];
    const double dj_max = y[j] > 0.0 ? alpha[j] : C - alpha[j];
    delta = std::min({delta, di_max, dj_max});

    const double dai = y[i] * delta;
    const double daj = -y[j] * delta;
    alpha[i] += dai;
    alpha[j] += daj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * K[i][t] * dai + y[j] * K[j][t] * daj);
    }

    if (cfg.record_objective && iter % 16 == 0) {
      double obj = 0.0;
      for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * (grad[t] - 1.0);
      model.objective_trace.push_back(0.5 * obj);
    }
  }
  model.iterations = iter;

  // bias from the midpoint of the violating interval: free support vectors
  // satisfy y_i - u_i = b at optimality
  double up_best = -1e300, low_best = 1e300;
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -y[t] * grad[t];
    if (in_up(t)) up_best = std::max(up_best, v);
    if (in_low(t)) low_best = std::min(low_best, v);
  }
  model.bias = 0.5 * (up_best + low_best);

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_vectors.push_back(rows[t]);
      model.dual_coef.push_back(alpha[t] * y[t]);
    }
  }
  return model;
}

Protocol protocol_from_name(const std::string& name) {
  if (name == "dependent" || name == "subject_dependent") return Protocol::subject_dependent;
  if (name == "independent" || name == "subject_independent") return Protocol::subject_independent;
  throw std::invalid_argument("protocol: unknown '" + name + "'");
}

std::string protocol_name(Protocol p) {
  return p == Protocol::subject_dependent ? "subject_dependent" : "subject_independent";
}

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<bool>& labels,
                                                       std::size_t folds) {
  if (folds < 2) throw std::invalid_argument("stratified_folds: need >= 2 folds");
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next_pos = 0, next_neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      out[next_pos % folds].push_back(i);
      ++next_pos;
    } else {
      out[next_neg % folds].push_back(i);
      ++next_neg;
    }
  }
  return out;
}

FoldOutcome run_fold(const Matrix& rows, const std::vector<bool>& labels,
                     const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& test_idx, const SvmConfig& cfg) {
  FoldOutcome out;
  const Matrix train_rows = gather_rows(rows, train_idx);
  std::vector<bool> train_labels;
  train_labels.reserve(train_idx.size());
  for (std::size_t i : train_idx) train_labels.push_back(labels[i]);

  out.scaler = fit_scaler(train_rows);
  out.model = train_svm(apply_scaler(out.scaler, train_rows), train_labels, cfg);

  std::size_t correct = 0;
  for (std::size_t i : test_idx) {
    if (out.model.predict(apply_scaler_row(out.scaler, rows[i])) == labels[i]) ++correct;
  }
  out.accuracy = test_idx.empty()
                     ? 0.0
                     : static_cast<double>(correct) / static_cast<double>(test_idx.size());
  return out;
}

CvReport cross_validate(const Matrix& rows, const std::vector<double>& ratings,
                        const std::vector<std::string>& subjects, const CvConfig& cfg) {
  if (rows.size() != ratings.size() || rows.size() != subjects.size()) {
    throw std::invalid_argument("cross_validate: rows/ratings/subjects length mismatch");
  }
  const std::vector<bool> labels = binarize_labels(ratings);

  CvReport report;
  report.protocol = cfg.protocol;
  report.label_name = cfg.label_name;

  if (cfg.protocol == Protocol::subject_dependent) {
    std::map<std::string, std::vector<std::size_t>> by_subject;
    for (std::size_t i = 0; i < subjects.size(); ++i) by_subject[subjects[i]].push_back(i);

    for (const auto& [subject, idx] : by_subject) {
      std::size_t pos = 0, neg = 0;
      for (std::size_t i : idx) (labels[i] ? pos : neg) += 1;
      if (pos < cfg.folds || neg < cfg.folds) {
        throw std::invalid_argument("cross_validate: insufficient strata for subject '" + subject +
                                    "'");
      }
      std::vector<bool> local_labels;
      local_labels.reserve(idx.size());
      for (std::size_t i : idx) local_labels.push_back(labels[i]);

      const auto folds = stratified_folds(local_labels, cfg.folds);
      double acc_sum = 0.0;
      for (const auto& test_local : folds) {
        std::vector<std::size_t> test_idx, train_idx;
        std::set<std::size_t> test_set(test_local.begin(), test_local.end());
        for (std::size_t li = 0; li < idx.size(); ++li) {
          (test_set.count(li) ? test_idx : train_idx).push_back(idx[li]);
        }
        acc_sum += run_fold(rows, labels, train_idx, test_idx, cfg.svm).accuracy;
      }
      report.fold_id.push_back(subject);
      report.fold_accuracy.push_back(acc_sum / static_cast<double>(folds.size()));
    }
  } else {
    std::vector<std::string> uniq;
    for (const auto& s : subjects) {
      if (std::find(uniq.begin(), uniq.end(), s) == uniq.end()) uniq.push_back(s);
    }
    if (uniq.size() < 2) {
      throw std::invalid_argument("cross_validate: subject-independent needs >= 2 subjects");
    }
    std::sort(uniq.begin(), uniq.end());
    const std::size_t n_groups = std::min(cfg.folds, uniq.size());

    for (std::size_t g = 0; g < n_groups; ++g) {
      std::set<std::string> held_out;
      for (std::size_t si = g; si < uniq.size(); si += n_groups) held_out.insert(uniq[si]);

      std::vector<std::size_t> test_idx, train_idx;
      for (std::size_t i = 0; i < subjects.size(); ++i) {
        (held_out.count(subjects[i]) ? test_idx : train_idx).push_back(i);
      }
      report.fold_id.push_back("fold" + std::to_string(g));
      report.fold_accuracy.push_back(run_fold(rows, labels, train_idx, test_idx, cfg.svm).accuracy);
    }
  }

  double acc = 0.0;
  for (double a : report.fold_accuracy) acc += a;
  report.mean_accuracy =
      report.fold_accuracy.empty() ? 0.0 : acc / static_cast<double>(report.fold_accuracy.size());
  return report;
}

}  // namespace fractalis::mlpipe
