#include "wsos/kernels.hpp"

#include <omp.h>

#include "wsos/errors.hpp"

namespace wsos::kernels {

namespace {

void check_shapes(const ConeOperator& cone, std::size_t blocks) {
  if (blocks != cone.num_blocks()) throw DimensionMismatch("inverse block count mismatch");
}

// Exact Hessian over the integers: each block is scaled by the lcm D of the
// denominators of W_i and the lcm E of its structural coefficients, so the
// contraction runs on mpz values and H gains sum_i Htilde_i / (D E)^2.
RMatrix hessian_integer(const ConeOperator& cone, const BlockSym<Rational>& inv_blocks) {
  const std::size_t n = cone.dim();
  RMatrix h(n, n);
  for (std::size_t i = 0; i < cone.num_blocks(); ++i) {
    const auto& wr = inv_blocks[i];
    const std::size_t side = wr.rows();
    const auto& entries = cone.entries(i);
    if (entries.empty()) continue;

    mpz_class d = 1, e_lcm = 1;
    for (const auto& v : wr.data()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& e : entries) mpz_lcm(e_lcm.get_mpz_t(), e_lcm.get_mpz_t(), e.value.get_den_mpz_t());
    std::vector<mpz_class> w(side * side);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = wr.data()[k].get_num() * (d / wr.data()[k].get_den());
    std::vector<mpz_class> a(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k)
      a[k] = entries[k].value.get_num() * (e_lcm / entries[k].value.get_den());

    std::vector<mpz_class> hb(n * n), z(side * side);
    mpz_class scaled;
    for (std::size_t u = 0; u < n; ++u) {
      const auto& col = cone.entries_for_coeff(i, u);
      if (col.empty()) continue;
      for (auto& v : z) v = 0;
      auto accumulate = [&](std::size_t r, std::size_t c, const mpz_class& val) {
        for (std::size_t k = 0; k < side; ++k) {
          const mpz_class& wkr = w[k * side + r];
          if (wkr == 0) continue;
          mpz_mul(scaled.get_mpz_t(), wkr.get_mpz_t(), val.get_mpz_t());
          for (std::size_t j = 0; j < side; ++j) {
            const mpz_class& wcj = w[c * side + j];
            if (wcj == 0) continue;
            mpz_addmul(z[k * side + j].get_mpz_t(), scaled.get_mpz_t(), wcj.get_mpz_t());
          }
        }
      };
      for (std::size_t idx : col) {
        const auto& e = entries[idx];
        accumulate(e.row, e.col, a[idx]);
        if (e.row != e.col) accumulate(e.col, e.row, a[idx]);
      }
      for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        mpz_class& target = hb[u * n + e.coeff];
        const mpz_class& z1 = z[e.row * side + e.col];
        mpz_addmul(target.get_mpz_t(), z1.get_mpz_t(), a[k].get_mpz_t());
        if (e.row != e.col) {
          const mpz_class& z2 = z[e.col * side + e.row];
          mpz_addmul(target.get_mpz_t(), z2.get_mpz_t(), a[k].get_mpz_t());
        }
      }
    }
    const mpz_class scale = d * d * e_lcm * e_lcm;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        if (hb[u * n + v] == 0) continue;
        Rational add(hb[u * n + v], scale);
        add.canonicalize();
        h(u, v) += add;
      }
  }
  return h;
}

}  // namespace

namespace serial {

template <typename T>
Vector<T> gradient(const ConeOperator& cone, const BlockSym<T>& inv_blocks) {
  Vector<T> g = cone.adjoint(inv_blocks);
  for (auto& v : g) v = -v;
  return g;
}

template <typename T>
Matrix<T> hessian(const ConeOperator& cone, const BlockSym<T>& inv_blocks) {
  check_shapes(cone, inv_blocks.size());
  if constexpr (ScalarTraits<T>::exact) return hessian_integer(cone, inv_blocks);
  const std::size_t n = cone.dim();
  Matrix<T> h(n, n);
  T t;
  for (std::size_t i = 0; i < cone.num_blocks(); ++i) {
    const auto& w = inv_blocks[i];
    const std::size_t side = w.rows();
    const auto& entries = cone.entries(i);
    Matrix<T> z(side, side);
    for (std::size_t u = 0; u < n; ++u) {
      const auto& col = cone.entries_for_coeff(i, u);
      if (col.empty()) continue;
      // Z = W A_u W
      for (auto& v : z.data()) v = 0;
      auto accumulate = [&](std::size_t a, std::size_t b, const T& val) {
        for (std::size_t k = 0; k < side; ++k) {
          const T& wka = w(k, a);
          if (is_zero(wka)) continue;
          T scaled = wka * val;
          for (std::size_t j = 0; j < side; ++j) {
            const T& wbj = w(b, j);
            if (is_zero(wbj)) continue;
            t = scaled * wbj;
            z(k, j) += t;
          }
        }
      };
      for (std::size_t idx : col) {
        const auto& e = entries[idx];
        T val;
        if constexpr (ScalarTraits<T>::exact) {
          val = e.value;
        } else {
          val = e.approx;
        }
        accumulate(e.row, e.col, val);
        if (e.row != e.col) accumulate(e.col, e.row, val);
      }
      // H_uv += <A_v, Z>
      for (const auto& e : entries) {
        if (e.row == e.col) {
          if (is_zero(z(e.row, e.row))) continue;
          t = z(e.row, e.row);
        } else {
          if (is_zero(z(e.row, e.col)) && is_zero(z(e.col, e.row))) continue;
          t = z(e.row, e.col) + z(e.col, e.row);
        }
        if constexpr (ScalarTraits<T>::exact) {
          t *= e.value;
        } else {
          t *= e.approx;
        }
        h(u, e.coeff) += t;
      }
    }
  }
  if constexpr (!ScalarTraits<T>::exact) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double avg = 0.5 * (h(a, b) + h(b, a));
        h(a, b) = avg;
        h(b, a) = avg;
      }
  }
  return h;
}

template Vector<double> gradient<double>(const ConeOperator&, const BlockSym<double>&);
template Vector<Rational> gradient<Rational>(const ConeOperator&, const BlockSym<Rational>&);
template Matrix<double> hessian<double>(const ConeOperator&, const BlockSym<double>&);
template Matrix<Rational> hessian<Rational>(const ConeOperator&, const BlockSym<Rational>&);

}  // namespace serial

namespace parallel {

DMatrix hessian_tensor(const ConeOperator& cone, const BlockSym<double>& inv_blocks) {
  check_shapes(cone, inv_blocks.size());
  const long n = static_cast<long>(cone.dim());
  DMatrix h(cone.dim(), cone.dim());

#pragma omp parallel
  {
    std::vector<DMatrix> z;
    for (const auto& w : inv_blocks) z.emplace_back(w.rows(), w.cols());

#pragma omp for schedule(dynamic, 1)
    for (long uu = 0; uu < n; ++uu) {
      const auto u = static_cast<std::size_t>(uu);
      auto row = h.row(u);
      for (std::size_t i = 0; i < cone.num_blocks(); ++i) {
        const auto& col = cone.entries_for_coeff(i, u);
        if (col.empty()) continue;
        const auto& w = inv_blocks[i];
        const std::size_t side = w.rows();
        const auto& entries = cone.entries(i);
        auto& zi = z[i];
        for (auto& v : zi.data()) v = 0.0;
        auto accumulate = [&](std::size_t a, std::size_t b, double val) {
          for (std::size_t k = 0; k < side; ++k) {
            const double s = w(k, a) * val;
            if (s == 0.0) continue;
            const double* wb = w.row(b).data();
            double* zk = zi.row(k).data();
            for (std::size_t j = 0; j < side; ++j) zk[j] += s * wb[j];
          }
        };
        for (std::size_t idx : col) {
          const auto& e = entries[idx];
          accumulate(e.row, e.col, e.approx);
          if (e.row != e.col) accumulate(e.col, e.row, e.approx);
        }
        for (const auto& e : entries) {
          const double t = e.row == e.col ? zi(e.row, e.row) : zi(e.row, e.col) + zi(e.col, e.row);
          row[e.coeff] += e.approx * t;
        }
      }
    }
  }

  for (std::size_t a = 0; a < cone.dim(); ++a)
    for (std::size_t b = a + 1; b < cone.dim(); ++b) {
      const double avg = 0.5 * (h(a, b) + h(b, a));
      h(a, b) = avg;
      h(b, a) = avg;
    }
  return h;
}

namespace {

// Q_i = P_i W_i P_i^T for every block, U x U each.
std::vector<DMatrix> nodal_gram(const NodalFactor& nf, const BlockSym<double>& inv_blocks) {
  const std::size_t n = nf.nodes.size();
  std::vector<DMatrix> out;
  for (std::size_t i = 0; i < inv_blocks.size(); ++i) {
    const auto& p = nf.basis_at_nodes[i];
    const auto& w = inv_blocks[i];
    const std::size_t side = w.rows();
    DMatrix pw(n, side);
    DMatrix q(n, n);
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long kk = 0; kk < nn; ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      for (std::size_t a = 0; a < side; ++a) {
        const double pka = p(k, a);
        const double* wa = w.row(a).data();
        double* out_row = pw.row(k).data();
        for (std::size_t b = 0; b < side; ++b) out_row[b] += pka * wa[b];
      }
    }
#pragma omp parallel for schedule(static)
    for (long kk = 0; kk < nn; ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      const double* pwk = pw.row(k).data();
      for (std::size_t l = 0; l < n; ++l) {
        const double* pl = p.row(l).data();
        double acc = 0.0;
        for (std::size_t b = 0; b < side; ++b) acc += pwk[b] * pl[b];
        q(k, l) = acc;
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

DMatrix hessian_nodal(const ConeOperator& cone, const BlockSym<double>& inv_blocks) {
  check_shapes(cone, inv_blocks.size());
  const NodalFactor* nf = cone.nodal();
  if (nf == nullptr) throw InvalidParameter("cone has no nodal factor");
  const std::size_t n = cone.dim();
  const long nn = static_cast<long>(n);
  const auto q = nodal_gram(*nf, inv_blocks);

  // G_kl = sum_i g_i(z_k) g_i(z_l) Q_i(k, l)^2
  DMatrix g(n, n);
#pragma omp parallel for schedule(static)
  for (long kk = 0; kk < nn; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    for (std::size_t l = 0; l < n; ++l) {
      double acc = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        const double wq = nf->weight_at_nodes[i][k] * nf->weight_at_nodes[i][l] * q[i](k, l);
        acc += wq * q[i](k, l);
      }
      g(k, l) = acc;
    }
  }

  // H = C G C^T
  const auto& c = nf->coeff_from_nodes;
  DMatrix cg(n, n);
#pragma omp parallel for schedule(static)
  for (long uu = 0; uu < nn; ++uu) {
    const auto u = static_cast<std::size_t>(uu);
    double* out_row = cg.row(u).data();
    for (std::size_t k = 0; k < n; ++k) {
      const double cuk = c(u, k);
      const double* gk = g.row(k).data();
      for (std::size_t l = 0; l < n; ++l) out_row[l] += cuk * gk[l];
    }
  }
  DMatrix h(n, n);
#pragma omp parallel for schedule(static)
  for (long uu = 0; uu < nn; ++uu) {
    const auto u = static_cast<std::size_t>(uu);
    const double* cgu = cg.row(u).data();
    for (std::size_t v = 0; v < n; ++v) {
      const double* cv = c.row(v).data();
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += cgu[l] * cv[l];
      h(u, v) = acc;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double avg = 0.5 * (h(a, b) + h(b, a));
      h(a, b) = avg;
      h(b, a) = avg;
    }
  return h;
}

DVector gradient_nodal(const ConeOperator& cone, const BlockSym<double>& inv_blocks) {
  check_shapes(cone, inv_blocks.size());
  const NodalFactor* nf = cone.nodal();
  if (nf == nullptr) throw InvalidParameter("cone has no nodal factor");
  const std::size_t n = cone.dim();
  DVector diag(n, 0.0);
  for (std::size_t i = 0; i < inv_blocks.size(); ++i) {
    const auto& p = nf->basis_at_nodes[i];
    const auto& w = inv_blocks[i];
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t a = 0; a < w.rows(); ++a)
        for (std::size_t b = 0; b < w.cols(); ++b) acc += p(k, a) * w(a, b) * p(k, b);
      diag[k] += nf->weight_at_nodes[i][k] * acc;
    }
  }
  DVector g(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += nf->coeff_from_nodes(u, k) * diag[k];
    g[u] = -acc;
  }
  return g;
}

DMatrix hessian(const ConeOperator& cone, const BlockSym<double>& inv_blocks) {
  if (cone.nodal() != nullptr) return hessian_nodal(cone, inv_blocks);
  return hessian_tensor(cone, inv_blocks);
}

}  // namespace parallel

int max_threads() { return omp_get_max_threads(); }

}  // namespace wsos::kernels
