#include "rankfield/predicates.hpp"

#include <gmpxx.h>

#include <cmath>

namespace rankfield::predicates {
namespace {

// Roughly 1000x the classical first-stage bounds; the exact path is rare
// enough that being generous costs nothing measurable.
constexpr double kRelativeBound = 1e-12;

thread_local unsigned long long g_fallbacks = 0;

template <class T>
int sign_of(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return (v > 0) - (v < 0);
  } else {
    return sgn(v);
  }
}

inline double sub(double a, double b) { return a - b; }
inline mpq_class sub(const mpq_class& a, const mpq_class& b) { return a - b; }

template <class T>
T orient2d_det(const T* a, const T* b, const T* c) {
  return sub(a[0], c[0]) * sub(b[1], c[1]) - sub(a[1], c[1]) * sub(b[0], c[0]);
}

template <class T>
T incircle_det(const T* a, const T* b, const T* c, const T* d) {
  const T adx = sub(a[0], d[0]), ady = sub(a[1], d[1]);
  const T bdx = sub(b[0], d[0]), bdy = sub(b[1], d[1]);
  const T cdx = sub(c[0], d[0]), cdy = sub(c[1], d[1]);
  const T alift = adx * adx + ady * ady;
  const T blift = bdx * bdx + bdy * bdy;
  const T clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
         clift * (adx * bdy - bdx * ady);
}

template <class T>
T orient3d_det(const T* a, const T* b, const T* c, const T* d) {
  const T adx = sub(a[0], d[0]), ady = sub(a[1], d[1]), adz = sub(a[2], d[2]);
  const T bdx = sub(b[0], d[0]), bdy = sub(b[1], d[1]), bdz = sub(b[2], d[2]);
  const T cdx = sub(c[0], d[0]), cdy = sub(c[1], d[1]), cdz = sub(c[2], d[2]);
  return adx * (bdy * cdz - bdz * cdy) + bdx * (cdy * adz - cdz * ady) +
         cdx * (ady * bdz - adz * bdy);
}

template <class T>
T insphere_det(const T* a, const T* b, const T* c, const T* d, const T* e) {
  const T aex = sub(a[0], e[0]), aey = sub(a[1], e[1]), aez = sub(a[2], e[2]);
  const T bex = sub(b[0], e[0]), bey = sub(b[1], e[1]), bez = sub(b[2], e[2]);
  const T cex = sub(c[0], e[0]), cey = sub(c[1], e[1]), cez = sub(c[2], e[2]);
  const T dex = sub(d[0], e[0]), dey = sub(d[1], e[1]), dez = sub(d[2], e[2]);
  const T ab = aex * bey - bex * aey;
  const T bc = bex * cey - cex * bey;
  const T cd = cex * dey - dex * cey;
  const T da = dex * aey - aex * dey;
  const T ac = aex * cey - cex * aey;
  const T bd = bex * dey - dex * bey;
  const T abc = aez * bc - bez * ac + cez * ab;
  const T bcd = bez * cd - cez * bd + dez * bc;
  const T cda = cez * da + dez * ac + aez * cd;
  const T dab = dez * ab + aez * bd + bez * da;
  const T alift = aex * aex + aey * aey + aez * aez;
  const T blift = bex * bex + bey * bey + bez * bez;
  const T clift = cex * cex + cey * cey + cez * cez;
  const T dlift = dex * dex + dey * dey + dez * dez;
  return (dlift * abc - clift * dab) + (blift * cda - alift * bcd);
}

// The permanent is the same polynomial with every difference and product
// replaced by its absolute value; it bounds the accumulated rounding error.
struct Abs {
  double v;
};
inline Abs operator-(Abs x, Abs y) { return {x.v + y.v}; }
inline Abs operator+(Abs x, Abs y) { return {x.v + y.v}; }
inline Abs sub(Abs a, Abs b) { return {std::fabs(a.v - b.v)}; }
inline Abs operator*(Abs x, Abs y) { return {x.v * y.v}; }

template <int N>
struct AbsPoint {
  Abs c[N];
  explicit AbsPoint(const double* p) {
    for (int i = 0; i < N; ++i) c[i] = Abs{p[i]};
  }
};

// With Abs, coordinate differences become |a - b| and every combination of
// terms adds, giving the permanent of the rounded differences.
template <int N, class F, class... P>
double permanent(F f, const P*... pts) {
  return f(AbsPoint<N>(pts).c...).v;
}

template <int N>
struct Exact {
  mpq_class c[N];
  explicit Exact(const double* p) {
    for (int i = 0; i < N; ++i) c[i] = mpq_class(p[i]);
  }
};

template <int N, class Fd, class Fa, class Fq, class... P>
int filtered(Fd fd, Fa fa, Fq fq, const P*... pts) {
  const double det = fd(pts...);
  const double bound = kRelativeBound * permanent<N>(fa, pts...);
  if (det > bound) return 1;
  if (-det > bound) return -1;
  ++g_fallbacks;
  return sgn(fq(Exact<N>(pts).c...));
}

}  // namespace

int orient2d(const double* a, const double* b, const double* c) {
  return filtered<2>([](auto... p) { return orient2d_det<double>(p...); },
                     [](auto... p) { return orient2d_det<Abs>(p...); },
                     [](auto... p) { return mpq_class(orient2d_det<mpq_class>(p...)); }, a, b, c);
}

int incircle(const double* a, const double* b, const double* c, const double* d) {
  return filtered<2>([](auto... p) { return incircle_det<double>(p...); },
                     [](auto... p) { return incircle_det<Abs>(p...); },
                     [](auto... p) { return mpq_class(incircle_det<mpq_class>(p...)); }, a, b, c,
                     d);
}

int orient3d(const double* a, const double* b, const double* c, const double* d) {
  return filtered<3>([](auto... p) { return orient3d_det<double>(p...); },
                     [](auto... p) { return orient3d_det<Abs>(p...); },
                     [](auto... p) { return mpq_class(orient3d_det<mpq_class>(p...)); }, a, b, c,
                     d);
}

int insphere(const double* a, const double* b, const double* c, const double* d,
             const double* e) {
  return filtered<3>([](auto... p) { return insphere_det<double>(p...); },
                     [](auto... p) { return insphere_det<Abs>(p...); },
                     [](auto... p) { return mpq_class(insphere_det<mpq_class>(p...)); }, a, b, c,
                     d, e);
}

int dot_sign(const double* a, const double* b, const double* p, int dim) {
  double det = 0.0, perm = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double u = a[i] - p[i], v = b[i] - p[i];
    det += u * v;
    perm += std::fabs(u * v);
  }
  const double bound = kRelativeBound * perm;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  ++g_fallbacks;
  mpq_class s = 0;
  for (int i = 0; i < dim; ++i) {
    s += (mpq_class(a[i]) - mpq_class(p[i])) * (mpq_class(b[i]) - mpq_class(p[i]));
  }
  return sgn(s);
}

unsigned long long exact_fallbacks() noexcept { return g_fallbacks; }

}  // namespace rankfield::predicates
