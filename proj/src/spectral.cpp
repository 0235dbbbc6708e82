#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "astopo/metrics.hpp"

namespace astopo {
namespace {

using Vec = Eigen::VectorXd;
using Operator = std::function<void(const Vec&, Vec&)>;

// y = D^-1/2 A D^-1/2 x
struct NormalizedAdjacency {
    const AnnotatedGraph& graph;
    Vec inv_sqrt;

    explicit NormalizedAdjacency(const AnnotatedGraph& g) : graph(g), inv_sqrt(g.node_count()) {
        for (node_t v = 0; v < g.node_count(); ++v)
            inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
    }

    void apply(const Vec& x, Vec& y) const {
        for (node_t v = 0; v < graph.node_count(); ++v) {
            double s = 0.0;
            for (const Neighbor& nb : graph.neighbors(v))
                s += inv_sqrt[nb.node] * x[nb.node];
            y[v] = inv_sqrt[v] * s;
        }
    }
};

void orthogonalize(Vec& w, const std::vector<Vec>& basis, const Vec* deflate) {
    for (int pass = 0; pass < 2; ++pass) {
        if (deflate)
            w -= deflate->dot(w) * *deflate;
        for (const Vec& b : basis)
            w -= b.dot(w) * b;
    }
}

// Largest eigenvalue of a symmetric operator on the complement of the unit
// vector `deflate`, by restarted Lanczos with full reorthogonalization.
double lanczos_largest(const Operator& op, Eigen::Index n, const Vec* deflate, double tolerance) {
    const Eigen::Index space = deflate ? n - 1 : n;
    if (space <= 0)
        throw std::invalid_argument("operator has no space left after deflation");
    const int max_basis = static_cast<int>(std::min<Eigen::Index>(space, 200));
    constexpr int max_restarts = 50;

    Rng rng(0x1a2c3e);
    Vec start(n);
    for (Eigen::Index i = 0; i < n; ++i)
        start[i] = rng.uniform() - 0.5;

    double theta = 0.0;
    for (int restart = 0; restart < max_restarts; ++restart) {
        std::vector<Vec> basis;
        std::vector<double> alpha, beta;
        Vec v = start;
        orthogonalize(v, basis, deflate);
        v.normalize();
        Vec w(n);
        Eigen::VectorXd ritz;
        bool done = false;
        for (int j = 0; j < max_basis; ++j) {
            basis.push_back(v);
            op(v, w);
            alpha.push_back(v.dot(w));
            orthogonalize(w, basis, deflate);
            const double b = w.norm();

            Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), j + 1);
            Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), j);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            theta = tri.eigenvalues()[j];
            ritz = tri.eigenvectors().col(j);
            const double residual = b * std::abs(ritz[j]);
            if (residual <= tolerance * std::max(1.0, std::abs(theta)) || b < 1e-13 ||
                (j + 1 == max_basis && max_basis == space)) {
                done = true;
                break;
            }
            if (j + 1 < max_basis) {
                beta.push_back(b);
                v = w / b;
            }
        }
        if (done)
            return theta;
        start.setZero();
        for (Eigen::Index i = 0; i < ritz.size(); ++i)
            start += ritz[i] * basis[i];
    }
    return theta;
}

}  // namespace

LaplacianExtremes laplacian_extremes(const AnnotatedGraph& graph, double tolerance) {
    const std::size_t n = graph.node_count();
    if (n < 2 || !is_connected(graph))
        throw std::invalid_argument("laplacian extremes need a connected graph with an edge");
    NormalizedAdjacency m(graph);
    const auto size = static_cast<Eigen::Index>(n);

    // L = I - M
    Operator laplacian = [&](const Vec& x, Vec& y) {
        m.apply(x, y);
        y = x - y;
    };
    // 2I - L = I + M
    Operator shifted = [&](const Vec& x, Vec& y) {
        m.apply(x, y);
        y += x;
    };
    Vec kernel(size);
    for (node_t v = 0; v < n; ++v)
        kernel[v] = std::sqrt(static_cast<double>(graph.degree(v)));
    kernel.normalize();

    LaplacianExtremes out;
    out.largest = lanczos_largest(laplacian, size, &kernel, tolerance);
    out.smallest_nonzero = 2.0 - lanczos_largest(shifted, size, &kernel, tolerance);
    return out;
}

std::vector<double> laplacian_spectrum_dense(const AnnotatedGraph& graph) {
    const std::size_t n = graph.node_count();
    if (n > 2000)
        throw std::invalid_argument("dense spectrum limited to 2000 nodes");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (node_t v = 0; v < n; ++v) {
        if (graph.degree(v) > 0)
            l(v, v) = 1.0;
        for (const Neighbor& nb : graph.neighbors(v))
            l(v, nb.node) = -1.0 / std::sqrt(static_cast<double>(graph.degree(v)) *
                                              static_cast<double>(graph.degree(nb.node)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace astopo
