#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "denskit/metrics.hpp"
#include "denskit/pdf.hpp"

namespace denskit {

enum class PairwiseMetric { hellinger_squared, l2_squared };

struct DistanceMatrix {
  Eigen::MatrixXd d2;  // squared distances
  std::vector<std::string> labels;
};

struct Embedding {
  Eigen::MatrixXd coords;            // m x d, columns ordered by eigenvalue
  std::vector<double> eigenvalues;   // all m, descending (negatives reported)
  std::vector<double> explained;     // cumulative fraction per retained dim
  std::vector<std::string> labels;
  Eigen::VectorXd dist_col_means;    // column means of d2 (out-of-sample context)
};

inline DistanceMatrix pairwise_distances(const std::vector<DiscretePdf>& pdfs,
                                         PairwiseMetric metric,
                                         std::vector<std::string> labels = {}) {
  const std::size_t m = pdfs.size();
  DistanceMatrix out;
  out.d2 = Eigen::MatrixXd::Zero(m, m);
  out.labels = labels.empty() ? std::vector<std::string>(m) : std::move(labels);
  if (out.labels.size() != m) throw DimensionError("pairwise_distances: label count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double v;
      if (metric == PairwiseMetric::hellinger_squared) {
        double d = hellinger_distance(pdfs[i], pdfs[j]);
        v = d * d;
      } else {
        require_same_grid(pdfs[i], pdfs[j]);
        v = 0.0;
        for (std::size_t k = 0; k < pdfs[i].mass.size(); ++k) {
          double diff = pdfs[i].mass[k] - pdfs[j].mass[k];
          v += diff * diff;
        }
      }
      out.d2(i, j) = v;
      out.d2(j, i) = v;  // mirrored, bit-exact symmetry
    }
  }
  return out;
}

// Classical double centering: W = -1/2 L D L with L = I - (1/m) 11^T, then a
// self-adjoint eigendecomposition. Coordinates use eigenvalues above
// 1e-12 * lambda_max; negative eigenvalues are reported but never embedded.
// Eigenvector sign fixed by making the first non-negligible entry positive.
inline Embedding inpca_embed(const DistanceMatrix& distances) {
  const Eigen::Index m = distances.d2.rows();
  if (m < 2 || distances.d2.cols() != m) throw DimensionError("inpca_embed: need m x m, m >= 2");
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(m, m) -
                      Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  Eigen::MatrixXd W = -0.5 * L * distances.d2 * L;
  W = 0.5 * (W + W.transpose());  // kill rounding asymmetry before the solver

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(W);
  if (solver.info() != Eigen::Success) throw NumericalError("inpca_embed: eigensolver failed");

  Embedding emb;
  emb.labels = distances.labels;
  emb.dist_col_means = distances.d2.colwise().mean();
  emb.eigenvalues.resize(m);
  std::vector<Eigen::Index> order(m);
  for (Eigen::Index i = 0; i < m; ++i) order[i] = m - 1 - i;  // solver sorts ascending
  for (Eigen::Index i = 0; i < m; ++i) emb.eigenvalues[i] = solver.eigenvalues()(order[i]);

  double total_abs = 0.0;
  for (double ev : emb.eigenvalues) total_abs += std::abs(ev);

  const double lambda_max = emb.eigenvalues.empty() ? 0.0 : std::max(emb.eigenvalues[0], 0.0);
  const double tol = 1e-12 * lambda_max;
  Eigen::Index d = 0;
  while (d < m && emb.eigenvalues[d] > tol) ++d;

  emb.coords = Eigen::MatrixXd::Zero(m, d);
  emb.explained.resize(d);
  double cum = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd u = solver.eigenvectors().col(order[k]);
    double max_abs = u.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(u(i)) > 1e-12 * max_abs) {
        if (u(i) < 0.0) u = -u;
        break;
      }
    }
    emb.coords.col(k) = u * std::sqrt(emb.eigenvalues[k]);
    cum += emb.eigenvalues[k];
    emb.explained[k] = (total_abs > 0.0) ? cum / total_abs : 1.0;
  }
  return emb;
}

// Cumulative explained-variance fraction of the leading d dimensions.
inline double explained_variance(const Embedding& emb, int d) {
  if (d < 1) throw ConfigError("explained_variance: d must be >= 1");
  if (emb.explained.empty()) return 0.0;
  std::size_t idx = std::min<std::size_t>(d, emb.explained.size()) - 1;
  return emb.explained[idx];
}

// Nystrom projection: coord_k(x) = -(1/(2 sqrt(lambda_k))) u_k . (d2_x - colmeans(D)).
// The constant-in-i centering terms vanish because u_k is orthogonal to 1.
inline std::vector<double> project_out_of_sample(const Embedding& emb,
                                                 const std::vector<double>& d2_to_base) {
  const Eigen::Index m = emb.coords.rows();
  if (static_cast<Eigen::Index>(d2_to_base.size()) != m)
    throw DimensionError("project_out_of_sample: distance vector length mismatch");
  Eigen::VectorXd delta(m);
  for (Eigen::Index i = 0; i < m; ++i) delta(i) = d2_to_base[i] - emb.dist_col_means(i);
  std::vector<double> coords(emb.coords.cols());
  for (Eigen::Index k = 0; k < emb.coords.cols(); ++k) {
    double lambda = emb.eigenvalues[k];
    Eigen::VectorXd u = emb.coords.col(k) / std::sqrt(lambda);
    coords[k] = -0.5 / std::sqrt(lambda) * u.dot(delta);
  }
  return coords;
}

inline std::vector<double> project_out_of_sample(const Embedding& emb,
                                                 const std::vector<DiscretePdf>& base,
                                                 const DiscretePdf& point,
                                                 PairwiseMetric metric = PairwiseMetric::hellinger_squared) {
  std::vector<double> d2(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (metric == PairwiseMetric::hellinger_squared) {
      double d = hellinger_distance(base[i], point);
      d2[i] = d * d;
    } else {
      require_same_grid(base[i], point);
      double v = 0.0;
      for (std::size_t k = 0; k < point.mass.size(); ++k) {
        double diff = base[i].mass[k] - point.mass[k];
        v += diff * diff;
      }
      d2[i] = v;
    }
  }
  return project_out_of_sample(emb, d2);
}

// Summed pointwise Hellinger distance between two trajectories on one
// context-length schedule.
inline double meta_trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (a.context_lengths != b.context_lengths)
    throw DimensionError("meta_trajectory_distance: context lengths differ");
  double total = 0.0;
  for (std::size_t i = 0; i < a.pdfs.size(); ++i)
    total += hellinger_distance(a.pdfs[i], b.pdfs[i]);
  return total;
}

inline Embedding meta_inpca(const std::vector<Trajectory>& trajectories) {
  const std::size_t m = trajectories.size();
  DistanceMatrix dm;
  dm.d2 = Eigen::MatrixXd::Zero(m, m);
  dm.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) dm.labels[i] = trajectories[i].label;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double d = meta_trajectory_distance(trajectories[i], trajectories[j]);
      dm.d2(i, j) = d * d;
      dm.d2(j, i) = d * d;
    }
  }
  return inpca_embed(dm);
}

}  // namespace denskit
