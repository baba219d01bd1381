#include "l2control/matrix_exp.hpp"

#include <cmath>

#include "l2control/errors.hpp"

namespace l2control {

namespace {

double one_norm(const Mat& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

Mat expm(const Mat& a, double t) {
  const Eigen::Index n = a.rows();
  if (n == 0 || n != a.cols()) throw InvalidInput("expm: matrix must be square and nonempty");
  if (!a.allFinite() || !std::isfinite(t)) throw InvalidInput("expm: entries must be finite");

  // Shift off the mean eigenvalue; restored as a scalar factor at the end.
  const double mu = t * a.trace() / static_cast<double>(n);
  Mat b = t * a;
  b.diagonal().array() -= mu;

  // Degree ladder from Higham's backward-error analysis: use the cheapest
  // [m/m] Pade approximant whose theta bound covers ||B||_1, scale and square
  // only once degree 13 runs out.  The small degrees matter here because the
  // quadrature walkers evaluate panel-sized arguments constantly.
  const double norm = one_norm(b);
  const Mat id = Mat::Identity(n, n);
  int squarings = 0;
  Mat u, v;

  if (norm <= 1.495585217958292e-2) {
    const Mat b2 = b * b;
    u = b * (b2 + 60.0 * id);
    v = 12.0 * b2 + 120.0 * id;
  } else if (norm <= 2.539398330063230e-1) {
    const Mat b2 = b * b;
    const Mat b4 = b2 * b2;
    u = b * (b4 + 420.0 * b2 + 15120.0 * id);
    v = 30.0 * b4 + 3360.0 * b2 + 30240.0 * id;
  } else if (norm <= 9.504178996162932e-1) {
    const Mat b2 = b * b;
    const Mat b4 = b2 * b2;
    const Mat b6 = b2 * b4;
    u = b * (b6 + 1512.0 * b4 + 277200.0 * b2 + 8648640.0 * id);
    v = 56.0 * b6 + 25200.0 * b4 + 1995840.0 * b2 + 17297280.0 * id;
  } else if (norm <= 2.097847961257068) {
    const Mat b2 = b * b;
    const Mat b4 = b2 * b2;
    const Mat b6 = b2 * b4;
    const Mat b8 = b4 * b4;
    u = b * (b8 + 3960.0 * b6 + 2162160.0 * b4 + 302702400.0 * b2 + 8821612800.0 * id);
    v = 90.0 * b8 + 110880.0 * b6 + 30270240.0 * b4 + 2075673600.0 * b2 + 17643225600.0 * id;
  } else {
    constexpr double theta13 = 5.371920351148152;
    if (norm > theta13) {
      squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
      b *= std::ldexp(1.0, -squarings);
    }

    static constexpr double c[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};

    const Mat b2 = b * b;
    const Mat b4 = b2 * b2;
    const Mat b6 = b2 * b4;
    u = b * (b6 * (c[13] * b6 + c[11] * b4 + c[9] * b2) + c[7] * b6 + c[5] * b4 + c[3] * b2 +
             c[1] * id);
    v = b6 * (c[12] * b6 + c[10] * b4 + c[8] * b2) + c[6] * b6 + c[4] * b4 + c[2] * b2 +
        c[0] * id;
  }

  // r = (V - U)^{-1} (V + U), U the odd part, V the even part.
  Mat f = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) f = (f * f).eval();
  f *= std::exp(mu);
  return f;
}

SegmentExpBasis make_negative_exp_basis(const Mat& a, const UniformSegment& seg) {
  SegmentExpBasis basis;
  basis.segment_base =
      seg.start == 0.0 ? Mat(Mat::Identity(a.rows(), a.cols())) : expm(a, -seg.start);
  basis.panel_step = expm(a, -seg.panel_width);
  basis.node_offset.reserve(seg.offsets.size());
  for (double d : seg.offsets) basis.node_offset.push_back(expm(a, -d));
  return basis;
}

}  // namespace l2control
