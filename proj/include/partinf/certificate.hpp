#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "partinf/errors.hpp"
#include "partinf/generator.hpp"
#include "partinf/graph.hpp"
#include "partinf/rng.hpp"
#include "partinf/text.hpp"

namespace partinf {

// v_i(y) = y_i * sum_j A_ij y_j, i.e. diag(A y y^T).
inline Eigen::VectorXd signed_degree(const Eigen::MatrixXd& a, const Labels& y) {
  detail::require(a.rows() == a.cols() && a.rows() == y.size(), "signed_degree: dimension mismatch");
  const Eigen::VectorXd x = y.to_vector();
  return x.cwiseProduct(a * x);
}

// L(y) = Diag(v(y)) - A. Construction verifies L y = 0.
class SignedLaplacian {
 public:
  SignedLaplacian(const Eigen::MatrixXd& a, Labels y) : labels_(std::move(y)) {
    matrix_ = -a;
    matrix_.diagonal() += signed_degree(a, labels_);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff() * a.rows());
    const double residual = (matrix_ * labels_.to_vector()).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * scale)
      throw NumericalFailure("signed Laplacian: L(y) y = 0 violated (residual " + text::format_real(residual) + ")");
  }

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const Labels& labels() const noexcept { return labels_; }
  int size() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  Eigen::MatrixXd matrix_;
  Labels labels_;
};

inline SignedLaplacian signed_laplacian(const Eigen::MatrixXd& a, const Labels& y) { return SignedLaplacian(a, y); }

// lambda_2 is min x^T L x over unit x orthogonal to y. Since L y = 0 this is
// the spectrum of L with one copy of the eigenvalue 0 removed, so it can be
// negative.

// Reference path: reflect y onto e_1 with a Householder matrix H, then the
// trailing (n-1) x (n-1) block of H L H is L restricted to y's complement.
inline double lambda2_dense(const SignedLaplacian& l) {
  const int n = l.size();
  detail::require(n >= 2, "lambda2: need at least two nodes");
  Eigen::VectorXd w = l.labels().to_vector() / std::sqrt(static_cast<double>(n));
  w(0) += w(0) >= 0 ? 1.0 : -1.0;
  w.normalize();
  // H L H with H = I - 2 w w^T.
  const Eigen::MatrixXd& m = l.matrix();
  const Eigen::VectorXd mw = m * w;
  const double wmw = w.dot(mw);
  Eigen::MatrixXd reflected = m - 2.0 * mw * w.transpose() - 2.0 * w * mw.transpose() + 4.0 * wmw * w * w.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reflected.bottomRightCorner(n - 1, n - 1), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("lambda2: dense eigendecomposition did not converge");
  return es.eigenvalues()(0);
}

// Fast path: Lanczos with full reorthogonalization, every vector kept
// orthogonal to y. Converges when the Ritz residual of the smallest Ritz
// value drops below tol * ||L||_inf.
inline double lambda2_lanczos(const SignedLaplacian& l, double tol = 1e-10, int max_steps = 0,
                              std::uint64_t seed = 0x5eed) {
  const int n = l.size();
  detail::require(n >= 2, "lambda2: need at least two nodes");
  const int dim = n - 1;
  if (max_steps <= 0) max_steps = dim;
  max_steps = std::min(max_steps, dim);
  const Eigen::MatrixXd& m = l.matrix();
  const double norm_inf = std::max(m.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  const Eigen::VectorXd y = l.labels().to_vector() / std::sqrt(static_cast<double>(n));

  CounterRng rng(seed, Stream::solver_init);
  Eigen::MatrixXd basis(n, max_steps);
  std::vector<double> alpha, beta;
  auto orthogonalize = [&](Eigen::VectorXd& v, int k) {
    for (int pass = 0; pass < 2; ++pass) {
      v -= y * y.dot(v);
      if (k > 0) v -= basis.leftCols(k) * (basis.leftCols(k).transpose() * v);
    }
  };
  auto fresh_vector = [&](int k) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v(i) = rng.normal();
      orthogonalize(v, k);
      const double nv = v.norm();
      if (nv > 1e-8) return Eigen::VectorXd(v / nv);
    }
    throw NumericalFailure("lambda2: could not extend Lanczos basis");
  };

  Eigen::VectorXd q = fresh_vector(0);
  double last_estimate = std::numeric_limits<double>::quiet_NaN();
  double last_residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_steps; ++k) {
    basis.col(k) = q;
    Eigen::VectorXd v = m * q;
    alpha.push_back(q.dot(v));
    v -= alpha.back() * q;
    if (k > 0) v -= beta.back() * basis.col(k - 1);
    orthogonalize(v, k + 1);
    double b = v.norm();

    // Ritz values of the current tridiagonal matrix.
    const int size = k + 1;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
    Eigen::VectorXd sub = size > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), size - 1))
                                   : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) throw NumericalFailure("lambda2: tridiagonal eigensolver failed");
    last_estimate = tri.eigenvalues()(0);
    last_residual = std::abs(b * tri.eigenvectors()(size - 1, 0));
    if (size == dim || (size >= 2 && last_residual <= tol * norm_inf)) return last_estimate;

    if (b <= 1e-12 * norm_inf) {
      // Invariant subspace found; continue from a new direction.
      beta.push_back(0.0);
      q = fresh_vector(k + 1);
    } else {
      beta.push_back(b);
      q = v / b;
    }
  }
  throw NumericalFailure("lambda2: Lanczos did not converge in " + std::to_string(max_steps) +
                         " steps (estimate " + text::format_real(last_estimate) + ", residual " +
                         text::format_real(last_residual) + ")");
}

inline constexpr int kDenseLambda2Limit = 500;

inline double lambda2(const SignedLaplacian& l) {
  return l.size() <= kDenseLambda2Limit ? lambda2_dense(l) : lambda2_lanczos(l);
}

struct CertificateReport {
  double lambda2 = 0.0;
  double lambda_min = 0.0;   // smallest eigenvalue of B = L(y_hat)
  double slackness = 0.0;    // <B, y_hat y_hat^T>
  double tolerance = 0.0;
  bool kkt_stationarity = false;
  bool kkt_primal = false;
  bool kkt_dual_psd = false;
  bool kkt_slackness = false;
  bool certified = false;

  // Flat "key=value" record, space separated, stable key order.
  std::string to_key_value() const {
    std::ostringstream out;
    out << "lambda2=" << text::format_real(lambda2) << " lambda_min=" << text::format_real(lambda_min)
        << " slackness=" << text::format_real(slackness) << " tolerance=" << text::format_real(tolerance)
        << " stationarity=" << kkt_stationarity << " primal=" << kkt_primal << " dual_psd=" << kkt_dual_psd
        << " complementary_slackness=" << kkt_slackness << " certified=" << certified;
    return out.str();
  }
};

// Default certification tolerance: 1e-7 * Delta_max of the support of A.
inline double default_certificate_tolerance(const Eigen::MatrixXd& a) {
  int dmax = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    dmax = std::max(dmax, static_cast<int>((a.row(i).array() != 0.0).count()));
  return 1e-7 * std::max(dmax, 1);
}

// Dual certificate for y_hat: Y = y_hat y_hat^T, V = Diag(v(y_hat)),
// B = V - A = L(y_hat). Certified when every KKT condition holds and
// lambda_2(L(y_hat)) > tol, which makes y_hat the unique maximizer of
// y^T A y up to global sign.
inline CertificateReport kkt_check(const Eigen::MatrixXd& a, const Labels& y_hat, double tol) {
  detail::require(tol > 0.0, "kkt_check: tolerance must be positive");
  detail::require(a.rows() == a.cols() && a.rows() == y_hat.size(), "kkt_check: dimension mismatch");
  const int n = y_hat.size();
  const Eigen::VectorXd x = y_hat.to_vector();
  const Eigen::MatrixXd y_mat = x * x.transpose();
  const Eigen::MatrixXd v_mat = Eigen::MatrixXd(signed_degree(a, y_hat).asDiagonal());
  const SignedLaplacian l(a, y_hat);
  const Eigen::MatrixXd& b = l.matrix();

  CertificateReport r;
  r.tolerance = tol;
  r.kkt_stationarity = (v_mat - a - b).cwiseAbs().maxCoeff() == 0.0;
  r.kkt_primal = (y_mat.diagonal().array() == 1.0).all();
  r.lambda2 = n >= 2 ? lambda2(l) : std::numeric_limits<double>::infinity();
  r.lambda_min = std::min(0.0, r.lambda2);
  r.kkt_dual_psd = r.lambda_min >= -tol;
  r.slackness = (b.cwiseProduct(y_mat)).sum();
  r.kkt_slackness = std::abs(r.slackness) <= tol * n;
  r.certified = r.kkt_stationarity && r.kkt_primal && r.kkt_dual_psd && r.kkt_slackness && r.lambda2 > tol;
  return r;
}

inline CertificateReport kkt_check(const Eigen::MatrixXd& a, const Labels& y_hat) {
  return kkt_check(a, y_hat, default_certificate_tolerance(a));
}

// E[A]: (1-2p) y*_i y*_j on edges, zero elsewhere.
inline Eigen::MatrixXd expected_observation(const Graph& g, const Labels& y_star, double p) {
  detail::require(p >= 0.0 && p < 0.5, "expected_observation: p must lie in [0, 0.5)");
  detail::require(y_star.size() == g.num_nodes(), "expected_observation: label length mismatch");
  const int n = g.num_nodes();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges()) m(i, j) = m(j, i) = (1.0 - 2.0 * p) * y_star[i] * y_star[j];
  return m;
}

// E[Diag(v(y*))] - E[A]: (1-2p) Delta_i on the diagonal, -(1-2p) y*_i y*_j on edges.
inline Eigen::MatrixXd expected_signed_laplacian(const Graph& g, const Labels& y_star, double p) {
  detail::require(p >= 0.0 && p < 0.5, "expected_signed_laplacian: p must lie in [0, 0.5)");
  detail::require(y_star.size() == g.num_nodes(), "expected_signed_laplacian: label length mismatch");
  const int n = g.num_nodes();
  const double s = 1.0 - 2.0 * p;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = s * g.degree(i);
  for (auto [i, j] : g.edges()) m(i, j) = m(j, i) = -s * y_star[i] * y_star[j];
  return m;
}

}  // namespace partinf
