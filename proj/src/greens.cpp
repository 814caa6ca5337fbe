#include "nep/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nep/errors.hpp"

namespace nep {

namespace {

void check_exists(double alpha, double L)
{
    if (alpha == 0.0 || 2.0 + alpha * L == 0.0) {
        std::ostringstream os;
        os << "Green's function does not exist for alpha=" << alpha << ", L=" << L
           << " (needs alpha != 0 and 2 + alpha L != 0)";
        throw Error(ErrorCode::greens_nonexistent, os.str());
    }
}

void check_profile(const ProblemSpec& problem, const SolutionProfile& profile)
{
    if (!problem.bc.is_robin()) {
        throw Error(ErrorCode::domain, "integral representation needs Robin conditions");
    }
    check_exists(problem.bc.alpha, problem.length);
    if (profile.size() < 3) {
        throw Error(ErrorCode::domain, "profile needs at least 3 samples");
    }
    double len = profile.length();
    if (std::fabs(len - problem.length) > 1e-9 * problem.length) {
        std::ostringstream os;
        os << "profile spans " << len << " but the problem has L=" << problem.length;
        throw Error(ErrorCode::domain, os.str());
    }
}

// f(u) and d/dxi f(u) at every node.
void forcing(const ProblemSpec& problem, const SolutionProfile& p, std::vector<double>& phi,
             std::vector<double>& dphi)
{
    const auto& m = problem.model();
    double root_lambda = std::sqrt(problem.lambda);
    std::size_t n = p.size();
    phi.resize(n);
    dphi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        phi[k] = m.f(p.u[k]);
        dphi[k] = m.f_prime(p.u[k]) * root_lambda * p.v[k];
    }
}

// Trapezoid on [x_a, x_b] of samples q with end slopes dq, corrected by
// -(h_b^2 q'(b) - h_a^2 q'(a)) / 12.
double corrected_trapezoid(const std::vector<double>& x, const std::vector<double>& q,
                           const std::vector<double>& dq, std::size_t a, std::size_t b)
{
    if (a == b) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t k = a; k < b; ++k) {
        sum += 0.5 * (x[k + 1] - x[k]) * (q[k] + q[k + 1]);
    }
    double ha = x[a + 1] - x[a];
    double hb = x[b] - x[b - 1];
    return sum - (hb * hb * dq[b] - ha * ha * dq[a]) / 12.0;
}

}  // namespace

double greens_value(double alpha, double L, double x, double xi)
{
    check_exists(alpha, L);
    double c = 1.0 / (alpha * (2.0 + alpha * L));
    if (x < xi) {
        return c * (1.0 + alpha * L - alpha * xi) * (1.0 + alpha * x);
    }
    return c * (1.0 + alpha * xi) * (1.0 + alpha * L - alpha * x);
}

IntegralImage integral_image(const ProblemSpec& problem, const SolutionProfile& profile)
{
    check_profile(problem, profile);
    const double alpha = problem.bc.alpha;
    const double L = problem.length;
    const double c = 1.0 / (alpha * (2.0 + alpha * L));
    const std::size_t n = profile.size();

    std::vector<double> phi;
    std::vector<double> dphi;
    forcing(problem, profile, phi, dphi);

    std::vector<double> xs(n);
    std::vector<double> q1(n), dq1(n), q2(n), dq2(n);
    for (std::size_t k = 0; k < n; ++k) {
        double xi = profile.x[k] - profile.x[0];
        xs[k] = xi;
        double w1 = 1.0 + alpha * xi;
        double w2 = 1.0 + alpha * L - alpha * xi;
        q1[k] = w1 * phi[k];
        dq1[k] = alpha * phi[k] + w1 * dphi[k];
        q2[k] = w2 * phi[k];
        dq2[k] = -alpha * phi[k] + w2 * dphi[k];
    }

    // Running trapezoid sums from the left.
    std::vector<double> cum1(n, 0.0), cum2(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double h = xs[k] - xs[k - 1];
        cum1[k] = cum1[k - 1] + 0.5 * h * (q1[k - 1] + q1[k]);
        cum2[k] = cum2[k - 1] + 0.5 * h * (q2[k - 1] + q2[k]);
    }
    const double h_first = xs[1] - xs[0];
    const double h_last = xs[n - 1] - xs[n - 2];

    IntegralImage img;
    img.value.resize(n);
    img.slope.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double I1 = 0.0;
        if (j > 0) {
            double hb = xs[j] - xs[j - 1];
            I1 = cum1[j] - (hb * hb * dq1[j] - h_first * h_first * dq1[0]) / 12.0;
        }
        double I2 = 0.0;
        if (j + 1 < n) {
            double ha = xs[j + 1] - xs[j];
            I2 = (cum2[n - 1] - cum2[j]) - (h_last * h_last * dq2[n - 1] - ha * ha * dq2[j]) / 12.0;
        }
        double A = 1.0 + alpha * L - alpha * xs[j];
        double B = 1.0 + alpha * xs[j];
        img.value[j] = problem.lambda * c * (A * I1 + B * I2);
        img.slope[j] = problem.lambda * c * alpha * (I2 - I1);
    }
    return img;
}

IntegralImage integral_image_reference(const ProblemSpec& problem, const SolutionProfile& profile)
{
    check_profile(problem, profile);
    const double alpha = problem.bc.alpha;
    const double L = problem.length;
    const double c = 1.0 / (alpha * (2.0 + alpha * L));
    const std::size_t n = profile.size();

    std::vector<double> phi;
    std::vector<double> dphi;
    forcing(problem, profile, phi, dphi);
    std::vector<double> xs(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = profile.x[k] - profile.x[0];
    }

    IntegralImage img;
    img.value.resize(n);
    img.slope.resize(n);
    std::vector<double> q(n), dq(n), qx(n), dqx(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x = xs[j];
        // Left piece: xi <= x.
        for (std::size_t k = 0; k <= j; ++k) {
            double g = greens_value(alpha, L, x, xs[k]);
            double g_xi = c * alpha * (1.0 + alpha * L - alpha * x);
            double g_x = -c * alpha * (1.0 + alpha * xs[k]);
            double g_x_xi = -c * alpha * alpha;
            q[k] = g * phi[k];
            dq[k] = g_xi * phi[k] + g * dphi[k];
            qx[k] = g_x * phi[k];
            dqx[k] = g_x_xi * phi[k] + g_x * dphi[k];
        }
        double left = corrected_trapezoid(xs, q, dq, 0, j);
        double left_x = corrected_trapezoid(xs, qx, dqx, 0, j);
        // Right piece: xi >= x, using the xi > x branch of the kernel.
        for (std::size_t k = j; k < n; ++k) {
            double g = c * (1.0 + alpha * L - alpha * xs[k]) * (1.0 + alpha * x);
            if (k > j) {
                g = greens_value(alpha, L, x, xs[k]);
            }
            double g_xi = -c * alpha * (1.0 + alpha * x);
            double g_x = c * alpha * (1.0 + alpha * L - alpha * xs[k]);
            double g_x_xi = -c * alpha * alpha;
            q[k] = g * phi[k];
            dq[k] = g_xi * phi[k] + g * dphi[k];
            qx[k] = g_x * phi[k];
            dqx[k] = g_x_xi * phi[k] + g_x * dphi[k];
        }
        double right = corrected_trapezoid(xs, q, dq, j, n - 1);
        double right_x = corrected_trapezoid(xs, qx, dqx, j, n - 1);
        img.value[j] = problem.lambda * (left + right);
        img.slope[j] = problem.lambda * (left_x + right_x);
    }
    return img;
}

double integral_residual(const ProblemSpec& problem, const SolutionProfile& profile)
{
    IntegralImage img = integral_image(problem, profile);
    double r = 0.0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        r = std::max(r, std::fabs(profile.u[j] - img.value[j]));
    }
    return r;
}

SolutionProfile picard_minimal(const ProblemSpec& problem, const PicardOptions& options)
{
    problem.validate();
    if (!problem.bc.is_robin() || problem.bc.alpha <= 0.0) {
        throw Error(ErrorCode::domain, "Picard iteration for the minimal solution needs alpha > 0");
    }
    const int n = std::max(options.grid, 8);
    SolutionProfile p;
    p.lambda = problem.lambda;
    p.bc = problem.bc;
    p.model_name = problem.model().name;
    p.type = SolutionType::s;
    p.x.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        p.x[k] = problem.length * k / n;
    }
    p.u.assign(n + 1, 0.0);
    p.v.assign(n + 1, 0.0);

    const double root_lambda = std::sqrt(problem.lambda);
    double prev_update = std::numeric_limits<double>::infinity();
    bool growing = false;
    for (int it = 1; it <= options.max_iter; ++it) {
        IntegralImage img = integral_image(problem, p);
        double update = 0.0;
        double peak = 0.0;
        for (int k = 0; k <= n; ++k) {
            if (!std::isfinite(img.value[k])) {
                throw Error(ErrorCode::no_minimal_solution,
                            "Picard iterates overflowed at iteration " + std::to_string(it));
            }
            update = std::max(update, std::fabs(img.value[k] - p.u[k]));
            peak = std::max(peak, std::fabs(img.value[k]));
        }
        p.u = std::move(img.value);
        for (int k = 0; k <= n; ++k) {
            p.v[k] = img.slope[k] / root_lambda;
        }
        if (options.observer) {
            options.observer(it, p.u);
        }
        if (peak > options.blowup) {
            throw Error(ErrorCode::no_minimal_solution,
                        "Picard iterates exceeded " + std::to_string(options.blowup) +
                            " (lambda beyond the fold?)");
        }
        growing = update > prev_update;
        prev_update = update;
        if (update < options.tol) {
            break;
        }
        if (it == options.max_iter && growing) {
            throw Error(ErrorCode::no_minimal_solution, "iteration budget exhausted with growing updates");
        }
    }
    const auto& pot = problem.pot;
    p.energy = 0.5 * p.v[0] * p.v[0] + pot(p.u[0]);
    return p;
}

double compatibility_defect(const NonlinearModel& model, const SolutionProfile& profile, double L)
{
    double sum = 0.0;
    double x0 = profile.x.front();
    for (std::size_t k = 0; k + 1 < profile.size(); ++k) {
        double a = (profile.x[k] - x0 - 0.5 * L) * model.f(profile.u[k]);
        double b = (profile.x[k + 1] - x0 - 0.5 * L) * model.f(profile.u[k + 1]);
        sum += 0.5 * (profile.x[k + 1] - profile.x[k]) * (a + b);
    }
    return sum;
}

}  // namespace nep
