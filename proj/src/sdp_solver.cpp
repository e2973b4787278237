#include "starcov/sdp_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "starcov/sdp_embedding.hpp"

namespace starcov {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Internal standard form after the real embedding:
//   min <C, X> + c_lp . x   s.t.   A(X, x) = b,   X block-PSD,   x >= 0.
// Constraint coefficients are weighted rank-one terms sum_t w_t v_t v_t^T
// per block; the LP rows (vector block plus inequality slacks) are dense.
struct BlockTerms {
  MatrixXd vecs;         // n x T term vectors
  std::vector<int> row;  // owning constraint per term
  VectorXd weight;
  int count() const { return static_cast<int>(row.size()); }
};

struct Standard {
  std::vector<int> dims;
  int lp = 0;
  int vec_dim = 0;  // leading LP entries forming the public vector block
  int m = 0;

  std::vector<MatrixXd> c_mat;
  VectorXd c_lp;
  VectorXd b;
  MatrixXd a_lp;  // m x lp

  std::vector<BlockTerms> terms;
  double obj_scale = 1.0;
  bool trivially_infeasible = false;
  std::string presolve_msg;
};

constexpr double kDropTol = 1e-13;

bool nonzero(const MatrixXcd& m) { return m.size() != 0 && m.norm() > 0; }

Standard build_standard(const SdpProblem& p) {
  Standard s;
  const std::size_t nb = p.matrix_dims.size();
  s.dims.reserve(nb);
  for (int d : p.matrix_dims) s.dims.push_back(2 * d);

  struct Row {
    const SdpConstraint* con;
    double scale;
    int slack = -1;  // slack section index, -1 for equalities
  };
  std::vector<Row> rows;
  int n_slack = 0;
  for (const auto& con : p.constraints) {
    double norm2 = 0;
    for (const auto& a : con.matrix_coeff) {
      if (a.size() != 0) norm2 += a.squaredNorm();
    }
    if (con.vector_coeff.size() != 0) norm2 += con.vector_coeff.squaredNorm();
    const double norm = std::sqrt(norm2);
    if (norm <= 1e-14) {
      // Constant row: keepable only if already satisfied.
      const bool ok = con.sense == SdpConstraint::Sense::eq
                          ? std::abs(con.rhs) <= 1e-12
                          : (con.sense == SdpConstraint::Sense::le
                                 ? con.rhs >= -1e-12
                                 : con.rhs <= 1e-12);
      if (!ok) {
        s.trivially_infeasible = true;
        s.presolve_msg = "constant constraint violated (rhs = " +
                         std::to_string(con.rhs) + ")";
        return s;
      }
      continue;
    }
    Row r{&con, std::max(norm, 1e-12), -1};
    if (con.sense != SdpConstraint::Sense::eq) r.slack = n_slack++;
    rows.push_back(r);
  }

  s.m = static_cast<int>(rows.size());
  s.vec_dim = p.vector_dim;
  s.lp = p.vector_dim + n_slack;
  s.b.resize(s.m);
  s.a_lp = MatrixXd::Zero(s.m, s.lp);

  std::vector<std::vector<double>> weights(nb);
  std::vector<std::vector<int>> owners(nb);
  std::vector<std::vector<VectorXd>> vecs(nb);
  for (int i = 0; i < s.m; ++i) {
    const auto& con = *rows[i].con;
    const double scale = rows[i].scale;
    s.b[i] = con.rhs / scale;
    if (con.vector_coeff.size() != 0) {
      s.a_lp.row(i).head(p.vector_dim) = con.vector_coeff / scale;
    }
    if (rows[i].slack >= 0) {
      s.a_lp(i, p.vector_dim + rows[i].slack) =
          con.sense == SdpConstraint::Sense::le ? 1.0 : -1.0;
    }
    for (std::size_t j = 0; j < con.matrix_coeff.size(); ++j) {
      if (!nonzero(con.matrix_coeff[j])) continue;
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(con.matrix_coeff[j] / scale);
      const VectorXd ev = es.eigenvalues();
      const double top = ev.cwiseAbs().maxCoeff();
      for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (std::abs(ev[k]) <= kDropTol * top) continue;
        const Eigen::VectorXcd u = es.eigenvectors().col(k);
        const int d = p.matrix_dims[j];
        VectorXd v1(2 * d), v2(2 * d);
        v1 << u.real(), u.imag();
        v2 << -u.imag(), u.real();
        const double w = ev[k] / 2.0;
        for (const VectorXd& v : {v1, v2}) {
          weights[j].push_back(w);
          owners[j].push_back(i);
          vecs[j].push_back(v);
        }
      }
    }
  }
  s.terms.resize(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const int t = static_cast<int>(weights[j].size());
    s.terms[j].vecs.resize(s.dims[j], t);
    s.terms[j].weight.resize(t);
    s.terms[j].row = owners[j];
    for (int k = 0; k < t; ++k) {
      s.terms[j].vecs.col(k) = vecs[j][k];
      s.terms[j].weight[k] = weights[j][k];
    }
  }

  // Objective, negated into min form, then normalized.
  s.c_mat.resize(nb);
  double cn2 = 0;
  for (std::size_t j = 0; j < nb; ++j) {
    if (nonzero(p.objective_matrix[j])) {
      s.c_mat[j] = -embedding_coefficient(p.objective_matrix[j]);
    } else {
      s.c_mat[j] = MatrixXd::Zero(s.dims[j], s.dims[j]);
    }
    cn2 += s.c_mat[j].squaredNorm();
  }
  s.c_lp = VectorXd::Zero(s.lp);
  if (p.objective_vector.size() != 0) {
    s.c_lp.head(p.vector_dim) = -p.objective_vector;
  }
  cn2 += s.c_lp.squaredNorm();
  s.obj_scale = std::max(std::sqrt(cn2), 1e-12);
  for (auto& c : s.c_mat) c /= s.obj_scale;
  s.c_lp /= s.obj_scale;
  return s;
}

struct Iterate {
  std::vector<MatrixXd> xm, zm;
  VectorXd xl, zl;
  VectorXd y;
};

VectorXd apply_a(const Standard& s, const std::vector<MatrixXd>& xm,
                 const VectorXd& xl) {
  VectorXd out = s.lp > 0 ? VectorXd(s.a_lp * xl) : VectorXd::Zero(s.m);
  for (std::size_t j = 0; j < s.dims.size(); ++j) {
    const auto& t = s.terms[j];
    if (t.count() == 0) continue;
    const MatrixXd xv = xm[j] * t.vecs;
    const Eigen::RowVectorXd diag = (xv.cwiseProduct(t.vecs)).colwise().sum();
    for (int k = 0; k < t.count(); ++k) out[t.row[k]] += t.weight[k] * diag[k];
  }
  return out;
}

void apply_at(const Standard& s, const VectorXd& y, std::vector<MatrixXd>& out,
              VectorXd& out_lp) {
  for (std::size_t j = 0; j < s.dims.size(); ++j) {
    const auto& t = s.terms[j];
    out[j].setZero(s.dims[j], s.dims[j]);
    if (t.count() == 0) continue;
    VectorXd wy(t.count());
    for (int k = 0; k < t.count(); ++k) wy[k] = t.weight[k] * y[t.row[k]];
    out[j].noalias() = t.vecs * wy.asDiagonal() * t.vecs.transpose();
    out[j] = 0.5 * (out[j] + out[j].transpose()).eval();
  }
  out_lp = s.a_lp.transpose() * y;
}

double max_step_psd(const MatrixXd& x, const MatrixXd& dx) {
  auto feasible = [&](double a) {
    return Eigen::LLT<MatrixXd>(MatrixXd(x + a * dx)).info() == Eigen::Success;
  };
  if (feasible(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 18; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = 1.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (dx[k] < 0) a = std::min(a, -x[k] / dx[k]);
  }
  return a;
}

double cone_dot(const std::vector<MatrixXd>& a, const VectorXd& al,
                const std::vector<MatrixXd>& b, const VectorXd& bl) {
  double v = al.dot(bl);
  for (std::size_t j = 0; j < a.size(); ++j) {
    v += (a[j].cwiseProduct(b[j])).sum();
  }
  return v;
}

struct IpmResult {
  Iterate it;
  SdpStatus status = SdpStatus::max_iterations;
  double rel_p = 0, rel_d = 0, rel_gap = 0;
  int iterations = 0;
  std::string diagnostic;
};

struct Direction {
  std::vector<MatrixXd> dx, dz;
  VectorXd dxl, dzl, dy;
};

IpmResult run_ipm(const Standard& s, const SdpSolverOptions& opt) {
  IpmResult res;
  const std::size_t nb = s.dims.size();
  int ntot = s.lp;
  for (int d : s.dims) ntot += d;
  ntot = std::max(ntot, 1);

  const double b_norm = s.m > 0 ? s.b.norm() : 0.0;
  double c_norm2 = s.c_lp.squaredNorm();
  for (const auto& c : s.c_mat) c_norm2 += c.squaredNorm();
  const double c_norm = std::sqrt(c_norm2);

  const double b_max = s.m > 0 ? s.b.cwiseAbs().maxCoeff() : 0.0;
  const double ip =
      std::max({10.0, std::sqrt(double(ntot)), (1.0 + b_max) * std::sqrt(double(ntot))});
  const double id = std::max({10.0, std::sqrt(double(ntot)), c_norm});

  Iterate it;
  it.xm.resize(nb);
  it.zm.resize(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    it.xm[j] = ip * MatrixXd::Identity(s.dims[j], s.dims[j]);
    it.zm[j] = id * MatrixXd::Identity(s.dims[j], s.dims[j]);
  }
  it.xl = VectorXd::Constant(s.lp, ip);
  it.zl = VectorXd::Constant(s.lp, id);
  it.y = VectorXd::Zero(s.m);

  std::vector<MatrixXd> zinv(nb), rd(nb), aty(nb), xv(nb), wv(nb);
  VectorXd rd_lp, aty_lp;
  Direction aff, cor;
  aff.dx.resize(nb);
  aff.dz.resize(nb);
  cor.dx.resize(nb);
  cor.dz.resize(nb);
  int stalls = 0;

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    res.iterations = iter + 1;

    const VectorXd ax = apply_a(s, it.xm, it.xl);
    const VectorXd r_p = s.b - ax;
    apply_at(s, it.y, aty, aty_lp);
    for (std::size_t j = 0; j < nb; ++j) rd[j] = s.c_mat[j] - it.zm[j] - aty[j];
    rd_lp = s.c_lp - it.zl - aty_lp;

    const double cx = cone_dot(s.c_mat, s.c_lp, it.xm, it.xl);
    const double by = s.m > 0 ? s.b.dot(it.y) : 0.0;
    double rd_norm2 = rd_lp.squaredNorm();
    for (const auto& r : rd) rd_norm2 += r.squaredNorm();
    res.rel_p = (s.m > 0 ? r_p.norm() : 0.0) / (1.0 + b_norm);
    res.rel_d = std::sqrt(rd_norm2) / (1.0 + c_norm);
    res.rel_gap = std::abs(cx - by) / (1.0 + std::abs(cx) + std::abs(by));

    if (res.rel_p <= opt.tol && res.rel_d <= opt.tol &&
        res.rel_gap <= opt.tol) {
      res.status = SdpStatus::optimal;
      res.it = it;
      return res;
    }

    // Farkas-style certificate: A*(y) + Z ~ 0 with b'y > 0 proves primal
    // infeasibility.
    if (by > 0) {
      double cert2 = (aty_lp + it.zl).squaredNorm();
      for (std::size_t j = 0; j < nb; ++j) {
        cert2 += (aty[j] + it.zm[j]).squaredNorm();
      }
      const double cert = std::sqrt(cert2) / by;
      if (cert <= opt.infeasibility_tol) {
        res.status = SdpStatus::infeasible;
        res.it = it;
        std::ostringstream os;
        os << "dual improving ray: ||A*(y)+Z||/b'y = " << cert << ", b'y = "
           << by;
        res.diagnostic = os.str();
        return res;
      }
    }

    const double mu = cone_dot(it.xm, it.xl, it.zm, it.zl) / ntot;
    if (!std::isfinite(mu) || mu > 1e120) {
      res.status = SdpStatus::numerical_failure;
      res.it = it;
      res.diagnostic = "iterate diverged";
      return res;
    }

    bool chol_ok = true;
    for (std::size_t j = 0; j < nb; ++j) {
      Eigen::LLT<MatrixXd> llt(it.zm[j]);
      if (llt.info() != Eigen::Success) {
        chol_ok = false;
        break;
      }
      zinv[j] = llt.solve(MatrixXd::Identity(s.dims[j], s.dims[j]));
      zinv[j] = 0.5 * (zinv[j] + zinv[j].transpose()).eval();
    }
    if (!chol_ok) {
      res.status = SdpStatus::numerical_failure;
      res.it = it;
      res.diagnostic = "dual block lost positive definiteness";
      return res;
    }

    // Schur complement M_ij = <A_i, X A_j Z^{-1}> from the term Gram
    // matrices; LP block adds A D A^T with D = diag(x/z).
    MatrixXd schur = MatrixXd::Zero(s.m, s.m);
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& t = s.terms[j];
      if (t.count() == 0) continue;
      xv[j] = it.xm[j] * t.vecs;
      wv[j] = zinv[j] * t.vecs;
      const MatrixXd p1 = t.vecs.transpose() * xv[j];
      const MatrixXd p2 = t.vecs.transpose() * wv[j];
      for (int a = 0; a < t.count(); ++a) {
        for (int c = 0; c < t.count(); ++c) {
          schur(t.row[a], t.row[c]) +=
              t.weight[a] * t.weight[c] * p1(a, c) * p2(a, c);
        }
      }
    }
    if (s.lp > 0) {
      const VectorXd d = it.xl.cwiseQuotient(it.zl);
      schur.noalias() += s.a_lp * d.asDiagonal() * s.a_lp.transpose();
    }
    schur = 0.5 * (schur + schur.transpose()).eval();

    Eigen::LDLT<MatrixXd> mfac(schur);
    if (mfac.info() != Eigen::Success || !mfac.isPositive()) {
      MatrixXd ridged = schur;
      ridged.diagonal().array() +=
          1e-13 * std::max(1.0, schur.diagonal().maxCoeff());
      mfac.compute(ridged);
      if (mfac.info() != Eigen::Success) {
        res.status = SdpStatus::numerical_failure;
        res.it = it;
        res.diagnostic = "Schur complement factorization failed";
        return res;
      }
    }
    auto schur_solve = [&](const VectorXd& rhs) {
      VectorXd dy = mfac.solve(rhs);
      dy += mfac.solve(rhs - schur * dy);
      return dy;
    };

    // q2_i = <A_i, X R_d Z^{-1}>, shared by predictor and corrector.
    VectorXd q2 = VectorXd::Zero(s.m);
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& t = s.terms[j];
      if (t.count() == 0) continue;
      const MatrixXd rw = rd[j] * wv[j];
      const Eigen::RowVectorXd diag = (rw.cwiseProduct(xv[j])).colwise().sum();
      for (int k = 0; k < t.count(); ++k) q2[t.row[k]] += t.weight[k] * diag[k];
    }
    if (s.lp > 0) {
      q2 += s.a_lp * (it.xl.cwiseProduct(rd_lp).cwiseQuotient(it.zl));
    }

    // Newton direction for target  dX Z + X dZ = nu I - K - X Z.
    auto direction = [&](double nu, const std::vector<MatrixXd>* kmat,
                         const VectorXd* klp, Direction& d) {
      std::vector<MatrixXd> g(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        g[j] = -it.xm[j];
        if (nu != 0) g[j] += nu * zinv[j];
        if (kmat) g[j] -= (*kmat)[j] * zinv[j];
      }
      VectorXd g_lp = -it.xl;
      if (s.lp > 0) {
        if (nu != 0) g_lp += nu * it.zl.cwiseInverse();
        if (klp) g_lp -= klp->cwiseQuotient(it.zl);
      }

      VectorXd q1 = s.lp > 0 ? VectorXd(s.a_lp * g_lp) : VectorXd::Zero(s.m);
      for (std::size_t j = 0; j < nb; ++j) {
        const auto& t = s.terms[j];
        if (t.count() == 0) continue;
        const MatrixXd gv = g[j] * t.vecs;
        const Eigen::RowVectorXd diag =
            (gv.cwiseProduct(t.vecs)).colwise().sum();
        for (int k = 0; k < t.count(); ++k) {
          q1[t.row[k]] += t.weight[k] * diag[k];
        }
      }

      d.dy = schur_solve(r_p - q1 + q2);
      apply_at(s, d.dy, d.dz, d.dzl);
      for (std::size_t j = 0; j < nb; ++j) {
        d.dz[j] = rd[j] - d.dz[j];
        const MatrixXd t = g[j] - it.xm[j] * d.dz[j] * zinv[j];
        d.dx[j] = 0.5 * (t + t.transpose());
      }
      d.dzl = rd_lp - d.dzl;
      d.dxl = s.lp > 0
                  ? VectorXd(g_lp - it.xl.cwiseProduct(d.dzl).cwiseQuotient(it.zl))
                  : VectorXd(0);
    };

    direction(0.0, nullptr, nullptr, aff);

    double ap = 1.0, ad = 1.0;
    for (std::size_t j = 0; j < nb; ++j) {
      ap = std::min(ap, max_step_psd(it.xm[j], aff.dx[j]));
      ad = std::min(ad, max_step_psd(it.zm[j], aff.dz[j]));
    }
    ap = std::min(ap, max_step_lp(it.xl, aff.dxl));
    ad = std::min(ad, max_step_lp(it.zl, aff.dzl));

    double mu_aff;
    {
      std::vector<MatrixXd> xa(nb), za(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        xa[j] = it.xm[j] + ap * aff.dx[j];
        za[j] = it.zm[j] + ad * aff.dz[j];
      }
      const VectorXd xla = it.xl + ap * aff.dxl;
      const VectorXd zla = it.zl + ad * aff.dzl;
      mu_aff = std::max(0.0, cone_dot(xa, xla, za, zla) / ntot);
    }
    const double sigma =
        std::clamp(std::pow(mu_aff / std::max(mu, 1e-300), 3.0), 1e-8, 1.0);

    std::vector<MatrixXd> kmat(nb);
    for (std::size_t j = 0; j < nb; ++j) kmat[j] = aff.dx[j] * aff.dz[j];
    const VectorXd klp = aff.dxl.cwiseProduct(aff.dzl);
    direction(sigma * mu, &kmat, &klp, cor);

    double sp = 1.0, sd = 1.0;
    for (std::size_t j = 0; j < nb; ++j) {
      sp = std::min(sp, max_step_psd(it.xm[j], cor.dx[j]));
      sd = std::min(sd, max_step_psd(it.zm[j], cor.dz[j]));
    }
    sp = std::min(sp, max_step_lp(it.xl, cor.dxl));
    sd = std::min(sd, max_step_lp(it.zl, cor.dzl));
    const double gamma = 0.98;
    sp = std::min(1.0, gamma * sp);
    sd = std::min(1.0, gamma * sd);

    for (std::size_t j = 0; j < nb; ++j) {
      it.xm[j] += sp * cor.dx[j];
      it.zm[j] += sd * cor.dz[j];
      it.xm[j] = 0.5 * (it.xm[j] + it.xm[j].transpose()).eval();
      it.zm[j] = 0.5 * (it.zm[j] + it.zm[j].transpose()).eval();
    }
    it.xl += sp * cor.dxl;
    it.zl += sd * cor.dzl;
    it.y += sd * cor.dy;

    if (opt.verbose) {
      std::cerr << "ipm iter " << iter << " mu " << mu << " rp " << res.rel_p
                << " rd " << res.rel_d << " gap " << res.rel_gap << " steps "
                << sp << "/" << sd << "\n";
    }

    if (sp < 1e-7 && sd < 1e-7) {
      if (++stalls >= 5) {
        res.status = SdpStatus::numerical_failure;
        res.it = it;
        res.diagnostic = "step lengths collapsed";
        return res;
      }
    } else {
      stalls = 0;
    }
  }
  res.it = it;
  res.diagnostic = "iteration cap reached";
  return res;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpSolverOptions& opt) {
  p.validate();
  const Standard s = build_standard(p);

  SdpSolution sol;
  if (s.trivially_infeasible) {
    sol.status = SdpStatus::infeasible;
    sol.diagnostic = s.presolve_msg;
    sol.matrix_values.resize(p.matrix_dims.size());
    for (std::size_t j = 0; j < p.matrix_dims.size(); ++j) {
      sol.matrix_values[j] =
          MatrixXcd::Zero(p.matrix_dims[j], p.matrix_dims[j]);
    }
    sol.vector_value = VectorXd::Zero(p.vector_dim);
    return sol;
  }

  const IpmResult r = run_ipm(s, opt);
  sol.status = r.status;
  sol.iterations = r.iterations;
  sol.primal_residual = r.rel_p;
  sol.dual_residual = r.rel_d;
  sol.gap = r.rel_gap;
  sol.diagnostic = r.diagnostic;

  // Map back to Hermitian matrices, clipping stray negative eigenvalues so
  // downstream eigendecompositions see exact PSD inputs.
  sol.matrix_values.resize(p.matrix_dims.size());
  for (std::size_t j = 0; j < p.matrix_dims.size(); ++j) {
    const MatrixXcd q = complex_from_embedding(r.it.xm[j]);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(q);
    const VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    sol.matrix_values[j] =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
  sol.vector_value = r.it.xl.head(s.vec_dim);

  double obj = p.objective_vector.size() != 0
                   ? p.objective_vector.dot(sol.vector_value)
                   : 0.0;
  for (std::size_t j = 0; j < p.matrix_dims.size(); ++j) {
    if (p.objective_matrix[j].size() != 0) {
      obj += (p.objective_matrix[j].conjugate()
                  .cwiseProduct(sol.matrix_values[j]))
                 .sum()
                 .real();
    }
  }
  sol.objective = obj;
  sol.dual_objective = s.m > 0 ? -s.obj_scale * s.b.dot(r.it.y) : 0.0;
  return sol;
}

}  // namespace starcov
