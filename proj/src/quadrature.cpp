#include "dunklkit/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dunklkit {

namespace {

double weight_total(double alpha, double beta) {
    // 2^(a+b+1) B(a+1, b+1)
    return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                    std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

}  // namespace

JacobiRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("node count must be >= 1");
    if (!(alpha > -1.0) || !(beta > -1.0)) throw std::invalid_argument("jacobi exponents must be > -1");

    const double mu0 = weight_total(alpha, beta);

    Eigen::VectorXd diag(n), subdiag(n);
    diag[0] = (beta - alpha) / (alpha + beta + 2.0);
    subdiag[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        const double s = 2.0 * i + alpha + beta;
        diag[i] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        double b2;
        if (i == 1)
            b2 = 4.0 * (alpha + 1.0) * (beta + 1.0) /
                 ((alpha + beta + 2.0) * (alpha + beta + 2.0) * (alpha + beta + 3.0));
        else
            b2 = 4.0 * i * (i + alpha) * (i + beta) * (i + alpha + beta) /
                 (s * s * (s + 1.0) * (s - 1.0));
        subdiag[i] = std::sqrt(b2);
    }

    JacobiRule rule;
    rule.n = n;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    if (n == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag.tail(n - 1));
    if (solver.info() != Eigen::Success) throw std::runtime_error("jacobi eigensolve failed");

    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    for (int i = 0; i < n; ++i) {
        if (!(rule.nodes[i] > -1.0 && rule.nodes[i] < 1.0))
            throw std::runtime_error("jacobi node outside (-1,1)");
        if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1]))
            throw std::runtime_error("jacobi nodes not increasing");
    }
    return rule;
}

std::vector<double> jacobi_weight_moments(double alpha, double beta, int max_m) {
    // M_{m+1} = ((beta - alpha) M_m + m M_{m-1}) / (alpha + beta + m + 2)
    std::vector<double> m(max_m + 1);
    m[0] = weight_total(alpha, beta);
    for (int i = 0; i < max_m; ++i) {
        double next = (beta - alpha) * m[i];
        if (i >= 1) next += i * m[i - 1];
        m[i + 1] = next / (alpha + beta + i + 2.0);
    }
    return m;
}

BoxGrid box_grid(std::span<const double> lambda, double k, std::span<const int> nodes_per_dim,
                 double min_gap) {
    const int dim = static_cast<int>(lambda.size()) - 1;
    if (dim < 1) throw std::invalid_argument("box grid needs at least two lambda coordinates");
    if (static_cast<int>(nodes_per_dim.size()) != dim)
        throw std::invalid_argument("nodes_per_dim size mismatch");
    if (!(k > 0)) throw std::invalid_argument("multiplicity k must be > 0");
    for (int i = 0; i < dim; ++i) {
        const double gap = lambda[i] - lambda[i + 1];
        if (!(gap > 0.0) || gap < min_gap)
            throw std::domain_error("lambda not strictly dominant");
    }

    BoxGrid grid;
    grid.dim = dim;
    grid.k = k;
    grid.nodes.resize(dim);
    grid.weights.resize(dim);
    for (int i = 0; i < dim; ++i) {
        const JacobiRule rule = gauss_jacobi(nodes_per_dim[i], k - 1.0, k - 1.0);
        const double center = 0.5 * (lambda[i] + lambda[i + 1]);
        const double half = 0.5 * (lambda[i] - lambda[i + 1]);
        const double scale = std::pow(half, 2.0 * k - 1.0);
        grid.nodes[i].resize(rule.n);
        grid.weights[i].resize(rule.n);
        for (int m = 0; m < rule.n; ++m) {
            grid.nodes[i][m] = center + half * rule.nodes[m];
            grid.weights[i][m] = scale * rule.weights[m];
        }
    }
    return grid;
}

SimplexRule simplex_rule(int n, const Multiplicity& k, int N) {
    if (n < 1) throw std::invalid_argument("simplex dimension must be >= 1");
    if (N < 1) throw std::invalid_argument("node count must be >= 1");
    const double kv = k.value();

    std::vector<JacobiRule> levels;
    std::vector<double> level_scale;
    levels.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double alpha = (n - i) * kv - 1.0;
        const double beta = kv - 1.0;
        levels.push_back(gauss_jacobi(N, alpha, beta));
        level_scale.push_back(std::pow(2.0, -(alpha + beta + 1.0)));
    }

    SimplexRule rule;
    rule.n = n;
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) count *= N;
    rule.point_count = static_cast<int>(count);
    rule.points.resize(count * (n + 1));
    rule.weights.resize(count);

    std::vector<int> idx(n, 0);
    for (std::size_t m = 0; m < count; ++m) {
        double weight = 1.0;
        double remaining = 1.0;
        double* t = &rule.points[m * (n + 1)];
        for (int i = 0; i < n; ++i) {
            const double u = 0.5 * (1.0 + levels[i].nodes[idx[i]]);
            weight *= level_scale[i] * levels[i].weights[idx[i]];
            t[i] = remaining * u;
            remaining *= 1.0 - u;
        }
        t[n] = remaining;
        rule.weights[m] = weight;

        for (int i = n - 1; i >= 0; --i) {
            if (++idx[i] < N) break;
            idx[i] = 0;
        }
    }
    return rule;
}

}  // namespace dunklkit
