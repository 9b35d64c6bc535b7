#include "qoco/cones.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qoco/error.hpp"

namespace qoco {

Index cone_degree(const ConeSpec& cone) { return cone.orthant_dim + cone.soc_count(); }

ConeLayout::ConeLayout(ConeSpec spec, Index orthant_chunk) : spec_(std::move(spec)) {
  orthant_chunk = std::max<Index>(1, orthant_chunk);
  dim_ = spec_.total_dim();
  const Index l = spec_.orthant_dim;
  if (l > 0) views_.push_back({ConeKind::Orthant, 0, l});
  for (Index off = 0; off < l; off += orthant_chunk) {
    items_.push_back({ConeKind::Orthant, off, std::min(orthant_chunk, l - off)});
    item_soc_.push_back(-1);
    item_block_offset_.push_back(off);
  }
  Index offset = l;
  Index block_offset = l;
  for (Index k = 0; k < spec_.soc_count(); ++k) {
    const Index q = spec_.soc_dims[k];
    views_.push_back({ConeKind::SecondOrder, offset, q});
    items_.push_back({ConeKind::SecondOrder, offset, q});
    item_soc_.push_back(k);
    item_block_offset_.push_back(block_offset);
    offset += q;
    block_offset += q * (q + 1) / 2;
  }
  block_value_count_ = block_offset;
}

void SerialExecutor::for_each(std::size_t count, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

ParallelExecutor::ParallelExecutor(unsigned workers)
    : pool_(workers ? workers : std::max(2u, std::thread::hardware_concurrency())) {}

void ParallelExecutor::for_each(std::size_t count, const std::function<void(std::size_t)>& fn) {
  pool_.parallel_for(count, [&fn](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

SerialExecutor& serial_executor() {
  static SerialExecutor exec;
  return exec;
}

namespace {

void check_length(std::span<const double> u, const ConeLayout& layout, const char* what) {
  if (u.size() != static_cast<std::size_t>(layout.dim())) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has length " + std::to_string(u.size()) +
                                                  ", cone dimension is " + std::to_string(layout.dim()));
  }
}

double tail_dot(const double* u, const double* v, Index dim) {
  double acc = 0.0;
  for (Index i = 1; i < dim; ++i) acc += u[i] * v[i];
  return acc;
}

double tail_norm(const double* u, Index dim) { return std::sqrt(tail_dot(u, u, dim)); }

// u0^2 - |u1|^2, or a nonpositive value when u is not strictly interior.
double soc_residual(const double* u, Index dim) {
  const double tn = tail_norm(u, dim);
  if (!(u[0] > tn)) return 0.0;
  return (u[0] - tn) * (u[0] + tn);
}

// Folds per-item partial results in item order.
template <typename Fn>
std::vector<double> per_item(const ConeLayout& layout, ConeExecutor& exec, Fn&& fn) {
  std::vector<double> partial(layout.items().size(), 0.0);
  exec.for_each(partial.size(), [&](std::size_t i) { partial[i] = fn(layout.items()[i]); });
  return partial;
}

void soc_apply(const double* w, double eta, const double* u, double* out, Index dim, bool inverse) {
  const double w0 = w[0];
  const double wu = tail_dot(w, u, dim);
  if (!inverse) {
    const double f = u[0] + wu / (1.0 + w0);
    out[0] = eta * (w0 * u[0] + wu);
    for (Index i = 1; i < dim; ++i) out[i] = eta * (u[i] + f * w[i]);
  } else {
    const double f = -u[0] + wu / (1.0 + w0);
    out[0] = (w0 * u[0] - wu) / eta;
    for (Index i = 1; i < dim; ++i) out[i] = (u[i] + f * w[i]) / eta;
  }
}

}  // namespace

std::vector<double> cone_identity(const ConeLayout& layout) {
  std::vector<double> e(layout.dim(), 0.0);
  for (const auto& v : layout.views()) {
    if (v.kind == ConeKind::Orthant) {
      std::fill_n(e.begin() + v.offset, v.dim, 1.0);
    } else {
      e[v.offset] = 1.0;
    }
  }
  return e;
}

bool is_interior(std::span<const double> u, const ConeLayout& layout) {
  check_length(u, layout, "u");
  for (const auto& v : layout.views()) {
    const double* p = u.data() + v.offset;
    if (v.kind == ConeKind::Orthant) {
      for (Index i = 0; i < v.dim; ++i) {
        if (!(p[i] > 0.0)) return false;
      }
    } else if (!(p[0] > tail_norm(p, v.dim))) {
      return false;
    }
  }
  return true;
}

double cone_dot(std::span<const double> u, std::span<const double> v, const ConeLayout& layout,
                ConeExecutor& exec) {
  check_length(u, layout, "u");
  check_length(v, layout, "v");
  const auto partial = per_item(layout, exec, [&](const ConeView& item) {
    double acc = 0.0;
    for (Index i = item.offset; i < item.offset + item.dim; ++i) acc += u[i] * v[i];
    return acc;
  });
  double total = 0.0;
  for (double x : partial) total += x;
  return total;
}

std::vector<double> jordan_product(std::span<const double> u, std::span<const double> v,
                                   const ConeLayout& layout, ConeExecutor& exec) {
  check_length(u, layout, "u");
  check_length(v, layout, "v");
  std::vector<double> out(layout.dim());
  exec.for_each(layout.items().size(), [&](std::size_t k) {
    const auto& item = layout.items()[k];
    const double* a = u.data() + item.offset;
    const double* b = v.data() + item.offset;
    double* o = out.data() + item.offset;
    if (item.kind == ConeKind::Orthant) {
      for (Index i = 0; i < item.dim; ++i) o[i] = a[i] * b[i];
    } else {
      o[0] = a[0] * b[0] + tail_dot(a, b, item.dim);
      for (Index i = 1; i < item.dim; ++i) o[i] = a[0] * b[i] + b[0] * a[i];
    }
  });
  return out;
}

std::vector<double> jordan_divide(std::span<const double> u, std::span<const double> v,
                                  const ConeLayout& layout, ConeExecutor& exec) {
  check_length(u, layout, "u");
  check_length(v, layout, "v");
  std::vector<double> out(layout.dim());
  exec.for_each(layout.items().size(), [&](std::size_t k) {
    const auto& item = layout.items()[k];
    const double* a = u.data() + item.offset;
    const double* b = v.data() + item.offset;
    double* o = out.data() + item.offset;
    if (item.kind == ConeKind::Orthant) {
      for (Index i = 0; i < item.dim; ++i) o[i] = b[i] / a[i];
    } else {
      const double rho = soc_residual(a, item.dim);
      if (!(rho > 0.0)) throw Error(ErrorCode::NotInterior, "Jordan division by a non-interior point");
      const double a0 = a[0];
      o[0] = (a0 * b[0] - tail_dot(a, b, item.dim)) / rho;
      for (Index i = 1; i < item.dim; ++i) o[i] = (b[i] - o[0] * a[i]) / a0;
    }
  });
  return out;
}

NTScalingSet compute_nt_scaling(std::span<const double> s, std::span<const double> z, const ConeLayout& layout,
                                ConeExecutor& exec) {
  check_length(s, layout, "s");
  check_length(z, layout, "z");
  NTScalingSet nt;
  nt.w.assign(layout.dim(), 0.0);
  nt.eta.assign(layout.spec().soc_count(), 0.0);
  nt.lambda.assign(layout.dim(), 0.0);

  exec.for_each(layout.items().size(), [&](std::size_t k) {
    const auto& item = layout.items()[k];
    const double* sp = s.data() + item.offset;
    const double* zp = z.data() + item.offset;
    double* w = nt.w.data() + item.offset;
    double* lam = nt.lambda.data() + item.offset;
    if (item.kind == ConeKind::Orthant) {
      for (Index i = 0; i < item.dim; ++i) {
        if (!(sp[i] > 0.0) || !(zp[i] > 0.0)) {
          throw Error(ErrorCode::NotInterior, "orthant coordinate " + std::to_string(item.offset + i));
        }
        w[i] = std::sqrt(sp[i] / zp[i]);
        lam[i] = std::sqrt(sp[i] * zp[i]);
      }
      return;
    }
    const Index q = item.dim;
    const double s_res = soc_residual(sp, q);
    const double z_res = soc_residual(zp, q);
    if (!(s_res > 0.0) || !(z_res > 0.0)) {
      throw Error(ErrorCode::NotInterior, "second-order cone at offset " + std::to_string(item.offset));
    }
    const double s_norm = std::sqrt(s_res);
    const double z_norm = std::sqrt(z_res);
    double sz = 0.0;
    for (Index i = 0; i < q; ++i) sz += (sp[i] / s_norm) * (zp[i] / z_norm);
    const double gamma = std::sqrt(0.5 * (1.0 + sz));
    w[0] = (sp[0] / s_norm + zp[0] / z_norm) / (2.0 * gamma);
    for (Index i = 1; i < q; ++i) w[i] = (sp[i] / s_norm - zp[i] / z_norm) / (2.0 * gamma);
    const double eta = std::sqrt(s_norm / z_norm);
    nt.eta[layout.item_soc(k)] = eta;
    soc_apply(w, eta, zp, lam, q, false);
  });
  return nt;
}

std::vector<double> apply_scaling(const NTScalingSet& nt, std::span<const double> u, ScalingMode mode,
                                  const ConeLayout& layout, ConeExecutor& exec) {
  check_length(u, layout, "u");
  std::vector<double> out(layout.dim());
  const bool inverse = mode == ScalingMode::MultiplyInverse;
  exec.for_each(layout.items().size(), [&](std::size_t k) {
    const auto& item = layout.items()[k];
    const double* w = nt.w.data() + item.offset;
    const double* a = u.data() + item.offset;
    double* o = out.data() + item.offset;
    if (item.kind == ConeKind::Orthant) {
      if (inverse) {
        for (Index i = 0; i < item.dim; ++i) o[i] = a[i] / w[i];
      } else {
        for (Index i = 0; i < item.dim; ++i) o[i] = a[i] * w[i];
      }
    } else {
      soc_apply(w, nt.eta[layout.item_soc(k)], a, o, item.dim, inverse);
    }
  });
  return out;
}

void nt_block_values(const NTScalingSet& nt, const ConeLayout& layout, std::span<double> out,
                     ConeExecutor& exec) {
  if (out.size() != static_cast<std::size_t>(layout.block_value_count())) {
    throw Error(ErrorCode::DimensionMismatch, "block value buffer has the wrong length");
  }
  exec.for_each(layout.items().size(), [&](std::size_t k) {
    const auto& item = layout.items()[k];
    const double* w = nt.w.data() + item.offset;
    double* o = out.data() + layout.item_block_offset(k);
    if (item.kind == ConeKind::Orthant) {
      for (Index i = 0; i < item.dim; ++i) o[i] = -w[i] * w[i];
      return;
    }
    const double eta2 = nt.eta[layout.item_soc(k)] * nt.eta[layout.item_soc(k)];
    Index pos = 0;
    for (Index col = 0; col < item.dim; ++col) {
      for (Index row = 0; row <= col; ++row) {
        double v = 2.0 * w[row] * w[col];
        if (row == col) v += (row == 0) ? -1.0 : 1.0;
        o[pos++] = -eta2 * v;
      }
    }
  });
}

namespace {

double soc_step(const double* u, const double* d, Index q) {
  // (u0 + a d0)^2 - |u1 + a d1|^2 = qa a^2 + 2 qb a + qc.
  const double qa = d[0] * d[0] - tail_dot(d, d, q);
  const double qb = u[0] * d[0] - tail_dot(u, d, q);
  const double qc = soc_residual(u, q);
  double roots[2];
  int count = 0;
  if (qa == 0.0) {
    if (qb < 0.0) roots[count++] = -qc / (2.0 * qb);
  } else {
    const double disc = qb * qb - qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double t = -(qb + std::copysign(sq, qb));
      if (t != 0.0) {
        roots[count++] = t / qa;
        roots[count++] = qc / t;
      } else {
        roots[count++] = -qb / qa;
      }
    }
  }
  // The ray cannot cross u0 = 0 without leaving the cone first. This also
  // covers q = 1, where the double root may be lost to rounding.
  double best = d[0] < 0.0 ? -u[0] / d[0] : kInfiniteStep;
  for (int i = 0; i < count; ++i) {
    const double a = roots[i];
    if (a > 0.0 && u[0] + a * d[0] >= 0.0) best = std::min(best, a);
  }
  return best;
}

}  // namespace

double max_step_to_boundary(std::span<const double> u, std::span<const double> du, const ConeLayout& layout,
                            ConeExecutor& exec) {
  check_length(u, layout, "u");
  check_length(du, layout, "du");
  const auto partial = per_item(layout, exec, [&](const ConeView& item) {
    const double* a = u.data() + item.offset;
    const double* d = du.data() + item.offset;
    double step = kInfiniteStep;
    if (item.kind == ConeKind::Orthant) {
      for (Index i = 0; i < item.dim; ++i) {
        if (!(a[i] > 0.0)) throw Error(ErrorCode::NotInterior, "step from a non-interior orthant point");
        if (d[i] < 0.0) step = std::min(step, -a[i] / d[i]);
      }
    } else {
      if (!(soc_residual(a, item.dim) > 0.0)) {
        throw Error(ErrorCode::NotInterior, "step from a non-interior second-order cone point");
      }
      step = soc_step(a, d, item.dim);
    }
    return step;
  });
  double step = kInfiniteStep;
  for (double x : partial) step = std::min(step, x);
  return step;
}

std::vector<double> bring_to_interior(std::span<const double> u, const ConeLayout& layout, ConeExecutor& exec) {
  check_length(u, layout, "u");
  const auto partial = per_item(layout, exec, [&](const ConeView& item) {
    const double* a = u.data() + item.offset;
    if (item.kind == ConeKind::Orthant) {
      double lo = a[0];
      for (Index i = 1; i < item.dim; ++i) lo = std::min(lo, a[i]);
      return -lo;
    }
    return tail_norm(a, item.dim) - a[0];
  });
  double alpha = -kInfiniteStep;
  for (double x : partial) alpha = std::max(alpha, x);

  std::vector<double> out(u.begin(), u.end());
  if (alpha < 0.0) return out;
  const double shift = 1.0 + alpha;
  for (const auto& v : layout.views()) {
    if (v.kind == ConeKind::Orthant) {
      for (Index i = v.offset; i < v.offset + v.dim; ++i) out[i] += shift;
    } else {
      out[v.offset] += shift;
    }
  }
  return out;
}

double compute_mu(std::span<const double> s, std::span<const double> z, const ConeLayout& layout,
                  ConeExecutor& exec) {
  return cone_dot(s, z, layout, exec) / static_cast<double>(layout.degree());
}

}  // namespace qoco
