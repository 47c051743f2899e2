#include "wstark/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace wstark {

namespace {

struct Vertex {
    Eigen::VectorXd x;
    double f;
};

double diameter(const std::vector<Vertex>& s) {
    double d = 0.0;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j) d = std::max(d, (s[i].x - s[j].x).norm());
    return d;
}

} // namespace

SimplexResult minimize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& start, const SimplexOptions& opts) {
    const int n = static_cast<int>(start.size());
    SimplexResult res;
    res.x = start;

    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evaluations;
        return f(x);
    };

    Eigen::VectorXd best_x = start;
    double best_f = eval(start);

    for (int round = 0; round <= opts.restarts; ++round) {
        std::vector<Vertex> s;
        s.reserve(n + 1);
        s.push_back({best_x, best_f});
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd x = best_x;
            x(i) += opts.initial_edge;
            s.push_back({x, eval(x)});
        }
        auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
        std::sort(s.begin(), s.end(), by_f);

        bool converged = false;
        while (res.iterations < opts.max_iterations * (round + 1)) {
            ++res.iterations;
            if (diameter(s) < opts.diameter_tol) {
                converged = true;
                break;
            }
            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i) centroid += s[i].x;
            centroid /= n;
            const Vertex& worst = s[n];

            Eigen::VectorXd xr = centroid + opts.reflection * (centroid - worst.x);
            const double fr = eval(xr);
            if (fr < s[0].f) {
                Eigen::VectorXd xe = centroid + opts.expansion * (xr - centroid);
                const double fe = eval(xe);
                s[n] = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
            } else if (fr < s[n - 1].f) {
                s[n] = {xr, fr};
            } else {
                const Eigen::VectorXd xc =
                    (fr < worst.f) ? centroid + opts.contraction * (xr - centroid)
                                   : centroid + opts.contraction * (worst.x - centroid);
                const double fc = eval(xc);
                if (fc < std::min(fr, worst.f)) {
                    s[n] = {xc, fc};
                } else {
                    for (int i = 1; i <= n; ++i) {
                        s[i].x = s[0].x + opts.shrink * (s[i].x - s[0].x);
                        s[i].f = eval(s[i].x);
                    }
                }
            }
            std::sort(s.begin(), s.end(), by_f);
        }
        best_x = s[0].x;
        best_f = s[0].f;
        res.converged = converged;
        if (converged && round > 0) break; // restart confirmed the minimum
    }

    res.x = best_x;
    res.value = best_f;
    return res;
}

} // namespace wstark
