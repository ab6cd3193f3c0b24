#include "ocp/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace ocp {
namespace {

constexpr double kPi = 3.14159265358979323846;

// One-dimensional profile w(t) = (t(1-t))^2 and its derivatives. Both stream
// functions are products of copies of w, so w and three derivatives cover
// every field and every Laplacian below.
double w0(double t) { return t * t - 2.0 * t * t * t + t * t * t * t; }
double w1(double t) { return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t; }
double w2(double t) { return 2.0 - 12.0 * t + 12.0 * t * t; }
double w3(double t) { return -12.0 + 24.0 * t; }

// Layer profile A(x) = atan((x - 0.5)/0.01) and derivatives. With
// s = 1 + 1e4 (x - 0.5)^2 the chain rule gives A' = 100/s,
// A'' = -2e6 (x-0.5)/s^2, A''' = -2e6 (1 - 3e4 (x-0.5)^2)/s^3.
double A0(double x) { return std::atan(100.0 * (x - 0.5)); }
double A1(double x) {
  const double q = x - 0.5;
  return 100.0 / (1.0 + 1e4 * q * q);
}
double A2(double x) {
  const double q = x - 0.5;
  const double s = 1.0 + 1e4 * q * q;
  return -2e6 * q / (s * s);
}
double A3(double x) {
  const double q = x - 0.5;
  const double s = 1.0 + 1e4 * q * q;
  return -2e6 * (1.0 - 3e4 * q * q) / (s * s * s);
}

// Product profile (wA)(x) of the adjoint stream function and its derivatives
// B = (wA)', B' and B'' by the Leibniz rule.
double wA(double x) { return w0(x) * A0(x); }
double B0(double x) { return w1(x) * A0(x) + w0(x) * A1(x); }
double B1(double x) { return w2(x) * A0(x) + 2.0 * w1(x) * A1(x) + w0(x) * A2(x); }
double B2(double x) {
  return w3(x) * A0(x) + 3.0 * w2(x) * A1(x) + 3.0 * w1(x) * A2(x) + w0(x) * A3(x);
}

// Pressure profile q(t) = t^2 - t; the product q(x)q(y) has mean 1/36.
double q0(double t) { return t * t - t; }
double q1(double t) { return 2.0 * t - 1.0; }

double clamp_box(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Construction-time sanity check of the closed-form derivative chains: the
// data fields are rebuilt from finite differences of the exact fields at a
// few fixed points and must agree to leading order. A transcription error in
// any derivative shows up as an O(1) relative mismatch; the tolerances only
// need to absorb the finite-difference truncation at the layer crest.
void validate_layer_fields(const BenchmarkProblem& prob) {
  constexpr double h = 5e-6;
  const Eigen::Vector2d ex(h, 0.0);
  const Eigen::Vector2d ey(0.0, h);
  const Eigen::Vector2d points[] = {{0.3, 0.7},   {0.497, 0.35}, {0.503, 0.62},
                                    {0.75, 0.25}, {0.5, 0.5},    {0.12, 0.44}};
  for (const Eigen::Vector2d& p : points) {
    const auto lap = [&](const VectorField& g) {
      return Eigen::Vector2d((g(p + ex) - 2.0 * g(p) + g(p - ex) + g(p + ey) - 2.0 * g(p) +
                              g(p - ey)) /
                             (h * h));
    };
    const auto grad = [&](const ScalarField& g) {
      return Eigen::Vector2d((g(p + ex) - g(p - ex)) / (2.0 * h),
                             (g(p + ey) - g(p - ey)) / (2.0 * h));
    };
    const double u = prob.exactControl(p);
    if (!(u >= prob.data.lower && u <= prob.data.upper))
      throw std::logic_error("layer problem: control escapes the admissible box");
    if (std::abs(prob.exactVelocityGradient(p).trace()) > 1e-10 ||
        std::abs(prob.exactAdjointGradient(p).trace()) > 1e-10)
      throw std::logic_error("layer problem: stream-function fields are not solenoidal");

    const Eigen::Vector2d fFd =
        -lap(prob.exactVelocity) + u * prob.exactVelocity(p) + grad(prob.exactPressure);
    const Eigen::Vector2d yOmegaFd = prob.exactVelocity(p) + lap(prob.exactAdjointVelocity) -
                                     u * prob.exactAdjointVelocity(p) +
                                     grad(prob.exactAdjointPressure);
    const double scaleF = 1.0 + fFd.norm();
    const double scaleY = 1.0 + yOmegaFd.norm();
    if ((prob.data.f(p) - fFd).norm() > 1e-3 * scaleF)
      throw std::logic_error("layer problem: load disagrees with the state equation");
    if ((prob.data.yOmega(p) - yOmegaFd).norm() > 1e-3 * scaleY)
      throw std::logic_error("layer problem: target disagrees with the adjoint equation");
  }
}

}  // namespace

BenchmarkProblem layer_problem() {
  BenchmarkProblem prob;
  prob.name = "layer";
  prob.initialMesh = build_unit_square(4);
  prob.hasExact = true;

  const double alpha = 1.0;
  const double lower = 0.1;
  const double upper = 0.2;

  VectorField velocity = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(50.0 * w0(x[0]) * w1(x[1]), -50.0 * w1(x[0]) * w0(x[1]));
  };
  MatrixField velocityGrad = [](const Eigen::Vector2d& x) {
    Eigen::Matrix2d G;
    G(0, 0) = 50.0 * w1(x[0]) * w1(x[1]);
    G(0, 1) = 50.0 * w0(x[0]) * w2(x[1]);
    G(1, 0) = -50.0 * w2(x[0]) * w0(x[1]);
    G(1, 1) = -50.0 * w1(x[0]) * w1(x[1]);
    return G;
  };
  VectorField velocityLap = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(50.0 * (w2(x[0]) * w1(x[1]) + w0(x[0]) * w3(x[1])),
                           -50.0 * (w3(x[0]) * w0(x[1]) + w1(x[0]) * w2(x[1])));
  };

  VectorField adjoint = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(50.0 * wA(x[0]) * w1(x[1]), -50.0 * B0(x[0]) * w0(x[1]));
  };
  MatrixField adjointGrad = [](const Eigen::Vector2d& x) {
    Eigen::Matrix2d G;
    G(0, 0) = 50.0 * B0(x[0]) * w1(x[1]);
    G(0, 1) = 50.0 * wA(x[0]) * w2(x[1]);
    G(1, 0) = -50.0 * B1(x[0]) * w0(x[1]);
    G(1, 1) = -50.0 * B0(x[0]) * w1(x[1]);
    return G;
  };
  VectorField adjointLap = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(50.0 * (B1(x[0]) * w1(x[1]) + wA(x[0]) * w3(x[1])),
                           -50.0 * (B2(x[0]) * w0(x[1]) + B0(x[0]) * w2(x[1])));
  };

  ScalarField pressure = [](const Eigen::Vector2d& x) {
    return q0(x[0]) * q0(x[1]) - 1.0 / 36.0;
  };
  VectorField pressureGrad = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(q1(x[0]) * q0(x[1]), q0(x[0]) * q1(x[1]));
  };
  ScalarField adjointPressure = [](const Eigen::Vector2d& x) {
    return std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]);
  };
  VectorField adjointPressureGrad = [](const Eigen::Vector2d& x) {
    const double cx = std::cos(2.0 * kPi * x[0]);
    const double sx = std::sin(2.0 * kPi * x[0]);
    const double cy = std::cos(2.0 * kPi * x[1]);
    const double sy = std::sin(2.0 * kPi * x[1]);
    return Eigen::Vector2d(2.0 * kPi * cx * sy, 2.0 * kPi * sx * cy);
  };

  ScalarField control = [=](const Eigen::Vector2d& x) {
    return clamp_box(velocity(x).dot(adjoint(x)) / alpha, lower, upper);
  };

  prob.data.alpha = alpha;
  prob.data.lower = lower;
  prob.data.upper = upper;
  // Strong state equation: f = -Lap y + u y + grad p.
  prob.data.f = [=](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(-velocityLap(x) + control(x) * velocity(x) + pressureGrad(x));
  };
  // Strong adjoint equation rearranged: yOmega = y + Lap z - u z + grad r.
  prob.data.yOmega = [=](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(velocity(x) + adjointLap(x) - control(x) * adjoint(x) +
                           adjointPressureGrad(x));
  };

  prob.exactControl = control;
  prob.exactVelocity = velocity;
  prob.exactVelocityGradient = velocityGrad;
  prob.exactPressure = pressure;
  prob.exactAdjointVelocity = adjoint;
  prob.exactAdjointGradient = adjointGrad;
  prob.exactAdjointPressure = adjointPressure;
  validate_layer_fields(prob);
  return prob;
}

BenchmarkProblem lshape_problem() {
  BenchmarkProblem prob;
  prob.name = "lshape";
  prob.initialMesh = uniform_refine(uniform_refine(build_lshape()).mesh).mesh;
  prob.hasExact = false;

  prob.data.alpha = 1.0;
  prob.data.lower = 1.0;
  prob.data.upper = 5.0;
  prob.data.f = [](const Eigen::Vector2d& x) {
    const double s = x[0] + x[1];
    return Eigen::Vector2d(1000.0 * s * s * s * s,
                           1000.0 * std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]));
  };
  prob.data.yOmega = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(1000.0 * std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]),
                           1000.0 * x[0] * x[1] * (1.0 - x[0]) * (1.0 - x[1]));
  };
  return prob;
}

}  // namespace ocp
