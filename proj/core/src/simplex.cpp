#include "ptffool/simplex.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ptffool/common.hpp"

namespace ptffool {

void LinearProgram::price(std::span<const double> y, std::span<double> out) const {
  std::vector<double> col(rows());
  for (std::size_t j = 0; j < cols(); ++j) {
    column(j, col);
    double s = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) s += col[i] * y[i];
    out[j] = s;
  }
}

DenseProgram::DenseProgram(std::size_t rows, std::size_t cols, std::vector<double> a,
                           std::vector<double> b, std::vector<double> c)
    : m_(rows), n_(cols), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  require(a_.size() == m_ * n_ && b_.size() == m_ && c_.size() == n_, ErrorKind::invalid_argument,
          "dense program dimensions do not match");
}

void DenseProgram::column(std::size_t j, std::span<double> out) const {
  for (std::size_t i = 0; i < m_; ++i) out[i] = a_[i * n_ + j];
}

PermutedProgram::PermutedProgram(const LinearProgram& base, std::vector<std::size_t> order)
    : base_(base), order_(std::move(order)) {
  require(order_.size() == base_.cols(), ErrorKind::invalid_argument, "permutation size mismatch");
}

void PermutedProgram::price(std::span<const double> y, std::span<double> out) const {
  std::vector<double> raw(base_.cols());
  base_.price(y, raw);
  for (std::size_t j = 0; j < order_.size(); ++j) out[j] = raw[order_[j]];
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

SimplexOptions default_simplex_options() {
  const auto& t = tolerances();
  SimplexOptions o;
  o.feasibility = t.lp_feasibility;
  o.optimality = t.lp_optimality;
  o.pivot = t.lp_pivot;
  o.max_iterations = t.lp_max_iterations;
  o.refactor_interval = t.lp_refactor_interval;
  o.stall_window = t.lp_stall_window;
  return o;
}

namespace {

class Solver {
 public:
  Solver(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), m_(lp.rows()), n_(lp.cols()), b_(m_), sign_(m_), head_(m_),
        pos_(n_ + m_, -1), binv_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_))),
        xb_(m_), col_(m_), reduced_(n_) {
    for (std::size_t i = 0; i < m_; ++i) {
      b_[i] = lp.rhs(i);
      sign_[i] = b_[i] < 0 ? -1.0 : 1.0;
      head_[i] = n_ + i;
      pos_[n_ + i] = static_cast<long>(i);
      binv_(ix(i), ix(i)) = sign_[i];
      xb_[ix(i)] = std::abs(b_[i]);
    }
  }

  SimplexResult run() {
    SimplexResult res;
    LpStatus s = iterate(true, res);
    res.phase1_iterations = res.iterations;
    if (s != LpStatus::optimal) {
      res.status = s;
      return res;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (head_[i] >= n_) infeas += xb_[ix(i)];
    if (infeas > opt_.feasibility * static_cast<double>(m_)) {
      res.status = LpStatus::infeasible;
      return res;
    }
    drive_out_artificials();
    s = iterate(false, res);
    res.status = s;
    res.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (head_[i] < n_) res.x[head_[i]] = std::max(0.0, xb_[ix(i)]);
    const Eigen::VectorXd y = duals(false);
    res.y.assign(y.data(), y.data() + m_);
    res.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      if (res.x[j] != 0.0) res.objective += lp_.cost(j) * res.x[j];
    res.basis = head_;
    res.bland_pivots = bland_pivots_;
    return res;
  }

 private:
  static Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

  double cost(std::size_t j, bool phase1) const {
    if (j >= n_) return phase1 ? 1.0 : 0.0;
    return phase1 ? 0.0 : lp_.cost(j);
  }

  void load_column(std::size_t j, Eigen::VectorXd& out) const {
    if (j >= n_) {
      out.setZero();
      out[ix(j - n_)] = sign_[j - n_];
      return;
    }
    lp_.column(j, std::span<double>(out.data(), m_));
  }

  Eigen::VectorXd duals(bool phase1) const {
    Eigen::VectorXd cb(ix(m_));
    for (std::size_t i = 0; i < m_; ++i) cb[ix(i)] = cost(head_[i], phase1);
    return binv_.transpose() * cb;
  }

  void refactor() {
    Eigen::MatrixXd basis(ix(m_), ix(m_));
    Eigen::VectorXd c(ix(m_));
    for (std::size_t i = 0; i < m_; ++i) {
      load_column(head_[i], c);
      basis.col(ix(i)) = c;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    binv_ = lu.inverse();
    Eigen::VectorXd b(ix(m_));
    for (std::size_t i = 0; i < m_; ++i) b[ix(i)] = b_[i];
    xb_ = binv_ * b;
    for (std::size_t i = 0; i < m_; ++i)
      if (xb_[ix(i)] < 0 && xb_[ix(i)] > -opt_.feasibility) xb_[ix(i)] = 0.0;
    since_refactor_ = 0;
  }

  void pivot(std::size_t r, std::size_t q, Eigen::VectorXd& u) {
    const double ur = u[ix(r)];
    const double theta = xb_[ix(r)] / ur;
    xb_ -= theta * u;
    xb_[ix(r)] = theta;
    const Eigen::RowVectorXd pr = binv_.row(ix(r)) / ur;
    u[ix(r)] = 0.0;
    binv_.noalias() -= u * pr;
    binv_.row(ix(r)) = pr;
    pos_[head_[r]] = -1;
    head_[r] = q;
    pos_[q] = static_cast<long>(r);
    ++since_refactor_;
  }

  LpStatus iterate(bool phase1, SimplexResult& res) {
    bool bland = false;
    int stall = 0;
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd u(ix(m_));
    for (;;) {
      if (since_refactor_ >= opt_.refactor_interval) refactor();
      const Eigen::VectorXd y = duals(phase1);
      lp_.price(std::span<const double>(y.data(), m_), reduced_);
      std::size_t q = n_;
      double most = -opt_.optimality;
      for (std::size_t j = 0; j < n_; ++j) {
        if (pos_[j] >= 0) continue;
        const double d = cost(j, phase1) - reduced_[j];
        if (d < most) {
          q = j;
          most = d;
          if (bland) break;
        }
      }
      if (q == n_) return LpStatus::optimal;
      if (res.iterations >= opt_.max_iterations) return LpStatus::iteration_limit;

      load_column(q, col_);
      u.noalias() = binv_ * col_;
      double theta_max = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (u[ix(i)] > opt_.pivot)
          theta_max = std::min(theta_max, (std::max(xb_[ix(i)], 0.0) + opt_.feasibility) / u[ix(i)]);
      }
      if (!std::isfinite(theta_max)) return LpStatus::unbounded;
      std::size_t r = m_;
      if (bland) {
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i)
          if (u[ix(i)] > opt_.pivot) min_ratio = std::min(min_ratio, std::max(xb_[ix(i)], 0.0) / u[ix(i)]);
        for (std::size_t i = 0; i < m_; ++i) {
          if (u[ix(i)] <= opt_.pivot) continue;
          if (std::max(xb_[ix(i)], 0.0) / u[ix(i)] > min_ratio + opt_.feasibility / u[ix(i)]) continue;
          if (r == m_ || head_[i] < head_[r]) r = i;
        }
        ++bland_pivots_;
      } else {
        double big = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
          if (u[ix(i)] <= opt_.pivot) continue;
          if (std::max(xb_[ix(i)], 0.0) / u[ix(i)] <= theta_max && u[ix(i)] > big) {
            big = u[ix(i)];
            r = i;
          }
        }
      }
      if (xb_[ix(r)] < 0) xb_[ix(r)] = 0.0;
      pivot(r, q, u);
      ++res.iterations;

      double obj = 0.0;
      for (std::size_t i = 0; i < m_; ++i) obj += cost(head_[i], phase1) * xb_[ix(i)];
      if (obj < best - 1e-12 * (1.0 + std::abs(best))) {
        best = obj;
        stall = 0;
        bland = false;
      } else if (++stall > opt_.stall_window) {
        bland = true;
      }
    }
  }

  void drive_out_artificials() {
    std::vector<double> alpha(n_);
    Eigen::VectorXd u(ix(m_));
    for (std::size_t r = 0; r < m_; ++r) {
      if (head_[r] < n_) continue;
      const Eigen::RowVectorXd rho = binv_.row(ix(r));
      lp_.price(std::span<const double>(rho.data(), m_), alpha);
      std::size_t best = n_;
      double mag = opt_.pivot;
      for (std::size_t j = 0; j < n_; ++j) {
        if (pos_[j] >= 0) continue;
        if (std::abs(alpha[j]) > mag) {
          mag = std::abs(alpha[j]);
          best = j;
        }
      }
      require(best != n_, ErrorKind::internal, "constraint matrix is rank deficient");
      load_column(best, col_);
      u.noalias() = binv_ * col_;
      pivot(r, best, u);
    }
    refactor();
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> b_;
  std::vector<double> sign_;
  std::vector<std::size_t> head_;
  std::vector<long> pos_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd col_;
  std::vector<double> reduced_;
  int since_refactor_ = 0;
  int bland_pivots_ = 0;
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& opt) {
  require(lp.rows() >= 1 && lp.cols() >= 1, ErrorKind::invalid_argument, "empty linear program");
  Solver s(lp, opt);
  return s.run();
}

}  // namespace ptffool
