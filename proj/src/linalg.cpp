#include "widegaps/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace widegaps::linalg {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiRelTol = 1e-12;

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (p != q) s += a[p * n + q] * a[p * n + q];
    return std::sqrt(s);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
    double norm = 0.0;
    for (double v : a) norm += v * v;
    norm = std::sqrt(norm);
    const double stop = kJacobiRelTol * norm;

    for (int sweep = 0; sweep < kMaxJacobiSweeps && off_diagonal_norm(a, n) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                // Rotation angle that zeroes a(p,q); t = tan(theta), the smaller root.
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a[r * n + p];
                    const double arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a[p * n + r];
                    const double aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace widegaps::linalg
