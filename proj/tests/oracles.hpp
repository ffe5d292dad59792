#pragma once
// Test-only oracles, independent of the library's closed forms.
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace oracles {

struct Quadrature {
    std::vector<double> nodes, weights;  // on [-1, 1]
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
inline Quadrature gauss_legendre(int n) {
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = x;
        q.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

// 2-D tensor quadrature of f(r, theta) over [r0,r1] x [t0,t1]
inline double integrate2d(const std::function<double(double, double)>& f, double r0, double r1,
                          double t0, double t1, int order = 64) {
    static thread_local int cached_order = 0;
    static thread_local Quadrature cached;
    if (cached_order != order) {
        cached = gauss_legendre(order);
        cached_order = order;
    }
    const double rm = 0.5 * (r0 + r1), rh = 0.5 * (r1 - r0);
    const double tm = 0.5 * (t0 + t1), th = 0.5 * (t1 - t0);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) {
        const double r = rm + rh * cached.nodes[i];
        double inner = 0.0;
        for (int j = 0; j < order; ++j) {
            const double t = tm + th * cached.nodes[j];
            inner += cached.weights[j] * f(r, t);
        }
        sum += cached.weights[i] * inner;
    }
    return sum * rh * th;
}

// centroid distance of the annular sector, straight from the area integrals
inline double neutral_offset(double ri, double ro, double beta) {
    const double num = integrate2d([](double r, double t) { return r * r * std::cos(t); }, ri, ro,
                                   -beta / 2.0, beta / 2.0);
    const double area = integrate2d([](double r, double) { return r; }, ri, ro, -beta / 2.0,
                                    beta / 2.0);
    return num / area;
}

// second moment about the in-plane axis through the tube center
inline double second_moment(double ri, double ro, double beta) {
    return integrate2d([](double r, double t) {
        const double y = r * std::sin(t);
        return y * y * r;
    }, ri, ro, -beta / 2.0, beta / 2.0);
}

// literal factor-by-factor product Tz Rz Tx Ry Tx, for checking arc_transform
inline Eigen::Isometry3d arc_by_factors(double q, double alpha, double length, double theta) {
    auto tz = [](double d) {
        Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
        t.translation().z() = d;
        return t;
    };
    auto tx = [](double d) {
        Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
        t.translation().x() = d;
        return t;
    };
    const Eigen::Isometry3d rz(Eigen::AngleAxisd(alpha, Eigen::Vector3d::UnitZ()));
    const Eigen::Isometry3d ry(Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()));
    const double radius = length / theta;
    return tz(q) * rz * tx(radius) * ry * tx(-radius);
}

}  // namespace oracles
