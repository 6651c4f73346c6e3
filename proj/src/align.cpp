#include "spartun/align.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "spartun/errors.hpp"

namespace spartun::align {

using nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

std::vector<double> softmax_row(const double* s, size_t n) {
  const double mx = *std::max_element(s, s + n);
  std::vector<double> out(n);
  double sum = 0.0;
  for (size_t j = 0; j < n; ++j) {
    out[j] = std::exp(s[j] - mx);
    sum += out[j];
  }
  for (double& v : out) v /= sum;
  return out;
}

struct ForwardCache {
  Matrix q, khat, v;  // K x D
  Matrix s;           // pre-softmax logits, K x K
  Matrix p;           // attention weights, K x K
  Matrix o_prime;     // K x D
  // Hidden activations h_ij, row-major (i*K + j) * H.
  std::vector<double> hidden;
};

ForwardCache forward(const Matrix& o, const FeatureMatrix& f,
                     const AttentionParams& params) {
  const size_t k = o.rows;
  const size_t d = o.cols;
  require(k >= 1, "attention needs K >= 1");
  params.validate(d);
  require(f.size() == k, "feature matrix K mismatch");
  const size_t h = params.hidden();

  ForwardCache c;
  c.q = matmul(o, params.w_q);
  c.khat = matmul(o, params.w_k);
  c.v = matmul(o, params.w_v);
  c.s = Matrix(k, k);
  c.hidden.resize(k * k * h);

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (size_t t = 0; t < d; ++t) dot += c.q.at(i, t) * c.khat.at(j, t);

      const geom::SpatialFeature& ft = f.at(i, j);
      const double feat[5] = {ft.d, ft.sin_h, ft.cos_h, ft.sin_v, ft.cos_v};
      double bias = params.mlp_b2;
      double* hid = &c.hidden[(i * k + j) * h];
      for (size_t u = 0; u < h; ++u) {
        double z = params.mlp_b1[u];
        for (size_t t = 0; t < 5; ++t) z += feat[t] * params.mlp_w1.at(t, u);
        hid[u] = std::tanh(z);
        bias += params.mlp_w2[u] * hid[u];
      }
      c.s.at(i, j) = dot * scale + bias;
    }
  }

  c.p = Matrix(k, k);
  for (size_t i = 0; i < k; ++i) {
    auto row = softmax_row(&c.s.data[i * k], k);
    std::copy(row.begin(), row.end(), c.p.data.begin() + i * k);
  }
  c.o_prime = matmul(c.p, c.v);
  return c;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols == b.rows, "matmul shape mismatch");
  Matrix out(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t t = 0; t < a.cols; ++t) {
      const double av = a.at(i, t);
      if (av == 0.0) continue;
      for (size_t j = 0; j < b.cols; ++j) out.at(i, j) += av * b.at(t, j);
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols, m.rows);
  for (size_t i = 0; i < m.rows; ++i) {
    for (size_t j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
  }
  return out;
}

FeatureMatrix build_feature_matrix(const std::vector<std::string>& ids,
                                   const std::vector<geom::Vec3>& positions,
                                   const FeatureOptions& options) {
  require(ids.size() == positions.size(), "ids and positions length mismatch");
  FeatureMatrix f;
  f.object_ids = ids;
  const auto grid = geom::pairwise_features(positions);
  for (const auto& row : grid) {
    f.data.insert(f.data.end(), row.begin(), row.end());
  }
  if (options.standardize_distance && !f.data.empty()) {
    double mean = 0.0;
    for (const auto& ft : f.data) mean += ft.d;
    mean /= static_cast<double>(f.data.size());
    double var = 0.0;
    for (const auto& ft : f.data) var += (ft.d - mean) * (ft.d - mean);
    const double sd = std::sqrt(var / static_cast<double>(f.data.size()));
    for (auto& ft : f.data) ft.d = sd > 0.0 ? (ft.d - mean) / sd : 0.0;
  }
  return f;
}

std::string features_to_json(const FeatureMatrix& f) {
  const size_t k = f.size();
  ordered_json j;
  j["object_ids"] = f.object_ids;
  ordered_json rows = ordered_json::array();
  for (size_t i = 0; i < k; ++i) {
    ordered_json row = ordered_json::array();
    for (size_t jj = 0; jj < k; ++jj) {
      const auto& ft = f.at(i, jj);
      row.push_back({ft.d, ft.sin_h, ft.cos_h, ft.sin_v, ft.cos_v});
    }
    rows.push_back(std::move(row));
  }
  j["features"] = std::move(rows);
  return j.dump();
}

AttentionParams AttentionParams::zeros(size_t d, size_t h) {
  AttentionParams p;
  p.w_q = Matrix(d, d);
  p.w_k = Matrix(d, d);
  p.w_v = Matrix(d, d);
  p.mlp_w1 = Matrix(5, h);
  p.mlp_b1.assign(h, 0.0);
  p.mlp_w2.assign(h, 0.0);
  p.mlp_b2 = 0.0;
  return p;
}

void AttentionParams::validate(size_t d) const {
  require(w_q.rows == d && w_q.cols == d, "W_Q must be D x D");
  require(w_k.rows == d && w_k.cols == d, "W_K must be D x D");
  require(w_v.rows == d && w_v.cols == d, "W_V must be D x D");
  const size_t h = mlp_b1.size();
  require(h >= 1, "MLP hidden width must be >= 1");
  require(mlp_w1.rows == 5 && mlp_w1.cols == h, "MLP W1 must be 5 x H");
  require(mlp_w2.size() == h, "MLP W2 must be H x 1");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  require(finite(w_q.data) && finite(w_k.data) && finite(w_v.data) &&
              finite(mlp_w1.data) && finite(mlp_b1) && finite(mlp_w2) &&
              std::isfinite(mlp_b2),
          "attention parameters must be finite");
}

Matrix spatial_attention_forward(const Matrix& o, const FeatureMatrix& f,
                                 const AttentionParams& params) {
  return forward(o, f, params).o_prime;
}

double mse_align_loss(const Matrix& o_prime, const Matrix& w) {
  require(o_prime.rows == w.rows && o_prime.cols == w.cols,
          "mse_align_loss shape mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < o_prime.data.size(); ++i) {
    const double diff = o_prime.data[i] - w.data[i];
    acc += diff * diff;
  }
  return acc / static_cast<double>(o_prime.data.size());
}

double cross_entropy(const Matrix& logits, const std::vector<size_t>& targets) {
  require(logits.rows == targets.size(), "one target per logit row");
  double acc = 0.0;
  for (size_t i = 0; i < logits.rows; ++i) {
    if (targets[i] >= logits.cols) {
      throw IndexError("target index " + std::to_string(targets[i]) +
                       " out of vocabulary " + std::to_string(logits.cols));
    }
    const double* row = &logits.data[i * logits.cols];
    const double mx = *std::max_element(row, row + logits.cols);
    double sum = 0.0;
    for (size_t v = 0; v < logits.cols; ++v) sum += std::exp(row[v] - mx);
    acc += std::log(sum) - (row[targets[i]] - mx);
  }
  return acc / static_cast<double>(logits.rows);
}

LossReport joint_loss(double lm, double align) {
  return {lm, align, lm + align};
}

AttentionGrads alignment_loss_grads(const Matrix& o, const FeatureMatrix& f,
                                    const AttentionParams& params,
                                    const Matrix& w) {
  const ForwardCache c = forward(o, f, params);
  const size_t k = o.rows;
  const size_t d = o.cols;
  require(w.rows == k && w.cols == d, "target shape mismatch");
  const size_t h = params.hidden();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  // dL/dO' for the mean-over-entries MSE.
  Matrix g(k, d);
  for (size_t i = 0; i < g.data.size(); ++i) {
    g.data[i] = 2.0 * (c.o_prime.data[i] - w.data[i]) /
                static_cast<double>(k * d);
  }

  const Matrix dv = matmul(transpose(c.p), g);
  const Matrix dp = matmul(g, transpose(c.v));

  // Softmax Jacobian per row: dS_ij = P_ij (dP_ij - sum_k dP_ik P_ik).
  Matrix ds(k, k);
  for (size_t i = 0; i < k; ++i) {
    double dot = 0.0;
    for (size_t j = 0; j < k; ++j) dot += dp.at(i, j) * c.p.at(i, j);
    for (size_t j = 0; j < k; ++j) {
      ds.at(i, j) = c.p.at(i, j) * (dp.at(i, j) - dot);
    }
  }

  Matrix dq(k, d);
  Matrix dkhat(k, d);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      const double v = ds.at(i, j) * scale;
      for (size_t t = 0; t < d; ++t) {
        dq.at(i, t) += v * c.khat.at(j, t);
        dkhat.at(j, t) += v * c.q.at(i, t);
      }
    }
  }

  AttentionGrads grads;
  grads.w_q = matmul(transpose(o), dq);
  grads.w_k = matmul(transpose(o), dkhat);
  grads.w_v = matmul(transpose(o), dv);
  grads.mlp_w1 = Matrix(5, h);
  grads.mlp_b1.assign(h, 0.0);
  grads.mlp_w2.assign(h, 0.0);
  grads.mlp_b2 = 0.0;

  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      const double db = ds.at(i, j);  // dL/dB_ij
      const geom::SpatialFeature& ft = f.at(i, j);
      const double feat[5] = {ft.d, ft.sin_h, ft.cos_h, ft.sin_v, ft.cos_v};
      const double* hid = &c.hidden[(i * k + j) * h];
      grads.mlp_b2 += db;
      for (size_t u = 0; u < h; ++u) {
        grads.mlp_w2[u] += db * hid[u];
        const double dz = db * params.mlp_w2[u] * (1.0 - hid[u] * hid[u]);
        grads.mlp_b1[u] += dz;
        for (size_t t = 0; t < 5; ++t) grads.mlp_w1.at(t, u) += feat[t] * dz;
      }
    }
  }

  for (const double* v : {&grads.mlp_b2}) {
    if (!std::isfinite(*v)) throw NonFiniteGradientError("gradient overflow");
  }
  auto check = [](const std::vector<double>& vals) {
    for (double v : vals) {
      if (!std::isfinite(v)) throw NonFiniteGradientError("gradient overflow");
    }
  };
  check(grads.w_q.data);
  check(grads.w_k.data);
  check(grads.w_v.data);
  check(grads.mlp_w1.data);
  check(grads.mlp_b1);
  check(grads.mlp_w2);
  return grads;
}

double grad_check(const Matrix& o, const FeatureMatrix& f,
                  const AttentionParams& params, const Matrix& w,
                  double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-3)) {
    throw RangeError("grad_check epsilon must be in (0, 1e-3]");
  }
  const AttentionGrads analytic = alignment_loss_grads(o, f, params, w);

  AttentionParams probe = params;
  std::vector<std::pair<double*, double>> entries;
  auto add = [&](std::vector<double>& vals, const std::vector<double>& g) {
    for (size_t i = 0; i < vals.size(); ++i) entries.push_back({&vals[i], g[i]});
  };
  add(probe.w_q.data, analytic.w_q.data);
  add(probe.w_k.data, analytic.w_k.data);
  add(probe.w_v.data, analytic.w_v.data);
  add(probe.mlp_w1.data, analytic.mlp_w1.data);
  add(probe.mlp_b1, analytic.mlp_b1);
  add(probe.mlp_w2, analytic.mlp_w2);
  entries.push_back({&probe.mlp_b2, analytic.mlp_b2});

  double worst = 0.0;
  for (auto& [slot, grad] : entries) {
    const double saved = *slot;
    *slot = saved + epsilon;
    const double up = mse_align_loss(spatial_attention_forward(o, f, probe), w);
    *slot = saved - epsilon;
    const double down = mse_align_loss(spatial_attention_forward(o, f, probe), w);
    *slot = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    if (!std::isfinite(numeric) || !std::isfinite(grad)) {
      throw NonFiniteGradientError("non-finite value during gradient check");
    }
    // The floor absorbs finite-difference rounding noise on entries whose
    // true gradient is exactly zero (e.g. the final MLP bias, which shifts
    // every score in a row uniformly and so cannot move the softmax).
    const double denom = std::max(1e-4, std::abs(numeric) + std::abs(grad));
    worst = std::max(worst, std::abs(numeric - grad) / denom);
  }
  return worst;
}

}  // namespace spartun::align
