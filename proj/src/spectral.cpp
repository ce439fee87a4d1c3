#include "triqi/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "triqi/errors.hpp"
#include "triqi/kernels.hpp"
#include "triqi/secular.hpp"

namespace triqi {

EigenSystem eigh(const Matrix& a, std::size_t dense_limit, double hermitian_tol) {
  if (a.rows() != a.cols()) throw UsageError("eigh: matrix is not square");
  if (static_cast<std::size_t>(a.rows()) > dense_limit) {
    throw NumericError(fmt::format("eigh: dimension {} exceeds the dense limit {}", a.rows(), dense_limit));
  }
  if (a.size() == 0) return {};
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > hermitian_tol * scale) {
    throw UsageError(fmt::format("eigh: matrix is not Hermitian (max |A - A^dagger| = {:.3e})", asym));
  }
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("eigh: QR iteration did not converge");
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

double support_power(double lambda, double s, double lambda_max, const PowerOptions& opts) {
  if (lambda_max <= 0.0) {
    if (lambda < -opts.negative_tol * std::abs(lambda_max) && lambda < 0.0) {
      throw NumericError(fmt::format("operator is not positive semidefinite (eigenvalue {:.3e})", lambda));
    }
    return 0.0;
  }
  if (lambda < -opts.negative_tol * lambda_max) {
    throw NumericError(fmt::format("operator is not positive semidefinite (eigenvalue {:.3e}, largest {:.3e})", lambda,
                                   lambda_max));
  }
  if (lambda <= opts.support_tol * lambda_max) return 0.0;
  return s == 0.0 ? 1.0 : std::pow(lambda, s);
}

RealVector support_power(const RealVector& eigenvalues, double s, const PowerOptions& opts) {
  if (eigenvalues.size() == 0) return eigenvalues;
  const double top = eigenvalues.maxCoeff();
  return eigenvalues.unaryExpr([&](double x) { return support_power(x, s, top, opts); });
}

namespace {

void check_exponent(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw UsageError(fmt::format("matrix_power: exponent {} outside [0, 1]", s));
}

DensityOperator dense_power(const DensityOperator& rho, double s, const PowerOptions& opts) {
  EigenSystem es = eigh(rho.to_dense(opts.dense_limit), opts.dense_limit);
  const RealVector p = support_power(es.eigenvalues, s, opts);
  Matrix out = es.eigenvectors * p.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
  return DensityOperator::dense(rho.space(), std::move(out), false);
}

}  // namespace

DensityOperator matrix_power(const DensityOperator& rho, double s, const PowerOptions& opts) {
  check_exponent(s);
  if (const auto* d = std::get_if<DiagonalRep>(&rho.rep())) {
    return DensityOperator::diagonal(rho.space(), support_power(d->values, s, opts), false);
  }
  auto framed = rho.framed();
  if (framed && framed->terms.empty()) {
    framed->diagonal = support_power(framed->diagonal, s, opts);
    return DensityOperator::diag_plus_low_rank(rho.space(), std::move(*framed), false);
  }
  if (framed && framed->terms.size() == 1) {
    const RankOneTerm& t = framed->terms.front();
    SecularRoot root = rank_one_update(framed->diagonal, t.weight, t.vector);
    const double top = root.eigenvalues().maxCoeff();
    auto f = [&](double x) { return support_power(x, s, top, opts); };
    return DensityOperator::diag_plus_low_rank(rho.space(), root.apply(f, framed->frame), false);
  }
  return dense_power(rho, s, opts);
}

TraceProduct trace_product(const DensityOperator& a, const DensityOperator& b, std::size_t dense_limit) {
  if (!(a.space() == b.space())) throw UsageError("trace_product: operators live on different spaces");
  auto fa = a.framed();
  auto fb = b.framed();
  if (fa && fb && fa->frame == fb->frame) {
    const DiagPlusLowRankRep* diag = fa->terms.empty() ? &*fa : (fb->terms.empty() ? &*fb : nullptr);
    if (diag != nullptr) {
      const DiagPlusLowRankRep& other = diag == &*fa ? *fb : *fa;
      double value = diag->diagonal.dot(other.diagonal);
      for (const auto& t : other.terms) value += t.weight * diag->diagonal.dot(t.vector.cwiseAbs2());
      return {value, 0.0};
    }
  }
  const Complex t = kernels::trace_product(a.to_dense(dense_limit), b.to_dense(dense_limit));
  return {t.real(), std::abs(t.imag())};
}

RealVector spectrum(const DensityOperator& rho, std::size_t dense_limit) {
  auto sorted = [](RealVector v) {
    std::sort(v.data(), v.data() + v.size());
    return v;
  };
  if (const auto* d = std::get_if<DiagonalRep>(&rho.rep())) return sorted(d->values);
  auto framed = rho.framed();
  if (framed && framed->terms.empty()) return sorted(framed->diagonal);
  if (framed && framed->terms.size() == 1) {
    return rank_one_update(framed->diagonal, framed->terms[0].weight, framed->terms[0].vector).eigenvalues();
  }
  return eigh(rho.to_dense(dense_limit), dense_limit).eigenvalues;
}

InvariantReport check_invariants(const DensityOperator& rho, std::size_t dense_limit) {
  InvariantReport r;
  if (const auto* d = std::get_if<DenseRep>(&rho.rep())) {
    r.hermiticity_error = (d->matrix - d->matrix.adjoint()).cwiseAbs().maxCoeff();
  } else if (rho.structure() == Structure::tensor_product && rho.space().total_dim() <= dense_limit) {
    const Matrix m = rho.to_dense(dense_limit);
    r.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  }
  r.hermitian = r.hermiticity_error <= 1e-12;
  if (!r.hermitian) return r;
  const RealVector ev = spectrum(rho, dense_limit);
  r.min_eigenvalue = ev.minCoeff();
  r.max_eigenvalue = ev.maxCoeff();
  r.positive = r.min_eigenvalue >= -kNegativeTol * std::max(r.max_eigenvalue, 0.0);
  r.trace = rho.trace();
  r.unit_trace = !rho.trace_normalized() || std::abs(r.trace - 1.0) <= 1e-12;
  return r;
}

}  // namespace triqi
