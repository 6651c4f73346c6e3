#pragma once

#include <string>
#include <vector>

#include "spartun/geometry.hpp"

namespace spartun::align {

// Dense row-major matrix of doubles. Sized for verification work, not speed.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// K x K grid of pairwise spatial features, plus the object ordering that
// fixes what row i means.
struct FeatureMatrix {
  std::vector<std::string> object_ids;
  std::vector<geom::SpatialFeature> data;  // row-major K x K

  size_t size() const { return object_ids.size(); }
  const geom::SpatialFeature& at(size_t i, size_t j) const {
    return data[i * object_ids.size() + j];
  }
  geom::SpatialFeature& at(size_t i, size_t j) {
    return data[i * object_ids.size() + j];
  }
};

struct FeatureOptions {
  // Optional z-scoring of the distance channel; angles are already bounded.
  bool standardize_distance = false;
};

FeatureMatrix build_feature_matrix(const std::vector<std::string>& ids,
                                   const std::vector<geom::Vec3>& positions,
                                   const FeatureOptions& options = {});

// JSON export of the K x K x 5 tensor with its id ordering.
std::string features_to_json(const FeatureMatrix& f);

// Projections plus the two-layer tanh MLP (5 -> H -> 1) that turns each
// feature vector into a scalar attention bias.
struct AttentionParams {
  Matrix w_q, w_k, w_v;          // D x D
  Matrix mlp_w1;                 // 5 x H
  std::vector<double> mlp_b1;    // H
  std::vector<double> mlp_w2;    // H
  double mlp_b2 = 0.0;

  static AttentionParams zeros(size_t d, size_t h = 8);
  size_t hidden() const { return mlp_b1.size(); }
  void validate(size_t d) const;  // throws ShapeError
};

struct LossReport {
  double lm = 0.0;
  double align = 0.0;
  double total = 0.0;
};

// O' = softmax(O W_q (O W_k)^T / sqrt(D) + B) O W_v, with B_ij = MLP(f_ij).
Matrix spatial_attention_forward(const Matrix& o, const FeatureMatrix& f,
                                 const AttentionParams& params);

// Mean squared difference over all K*D entries.
double mse_align_loss(const Matrix& o_prime, const Matrix& w);

// Mean negative log-softmax probability of the target tokens.
double cross_entropy(const Matrix& logits, const std::vector<size_t>& targets);

LossReport joint_loss(double lm, double align);

struct AttentionGrads {
  Matrix w_q, w_k, w_v;
  Matrix mlp_w1;
  std::vector<double> mlp_b1;
  std::vector<double> mlp_w2;
  double mlp_b2 = 0.0;
};

// Analytic gradients of mse_align_loss(spatial_attention_forward(...), w)
// with respect to every parameter entry.
AttentionGrads alignment_loss_grads(const Matrix& o, const FeatureMatrix& f,
                                    const AttentionParams& params,
                                    const Matrix& w);

// Central finite differences against the analytic gradients; returns the
// max relative error over all parameter entries.
double grad_check(const Matrix& o, const FeatureMatrix& f,
                  const AttentionParams& params, const Matrix& w,
                  double epsilon = 1e-5);

}  // namespace spartun::align
