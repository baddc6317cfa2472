#include "macrofield/calibrate.hpp"

#include "macrofield/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace macrofield {

double ChainCorrection::factor(double year) const {
    return V_i + (V_e - V_i) * (year - t_i) / static_cast<double>(t_e - t_i);
}

ChainCorrection chain_correction(const Trajectory& model, const EconSeries& data,
                                 std::optional<int> t_i, std::optional<int> t_e) {
    std::vector<int> shared;
    for (const auto& s : model.steps) {
        if (data.find(s.year) != nullptr) shared.push_back(s.year);
    }
    if (shared.empty()) throw ParameterError("model and data share no years");
    ChainCorrection c;
    c.t_i = t_i.value_or(shared.front());
    c.t_e = t_e.value_or(shared.back());
    if (c.t_e <= c.t_i) throw ParameterError("chain correction needs t_e > t_i");
    auto ratio_at = [&](int year) {
        const auto* step = model.at_year(year);
        const auto* rec = data.find(year);
        if (step == nullptr || rec == nullptr) {
            throw ParameterError("model and data do not overlap at " + std::to_string(year));
        }
        const double points = step->Y + step->K;
        if (std::abs(points) < kEpsDiv) {
            throw DegenerateError("model point sum Y+K vanishes at " + std::to_string(year));
        }
        return (rec->gdp + rec->assets) / points;
    };
    c.V_i = ratio_at(c.t_i);
    c.V_e = ratio_at(c.t_e);
    return c;
}

std::vector<ChainedStep> apply_chain(const ChainCorrection& corr, const Trajectory& model) {
    std::vector<ChainedStep> out;
    out.reserve(model.steps.size());
    for (const auto& s : model.steps) {
        const double f = corr.factor(s.year);
        out.push_back({s.year, s.Y * f, s.K * f, f, s.year < corr.t_i || s.year > corr.t_e});
    }
    return out;
}

namespace {

double sse(const std::vector<double>& t, const std::vector<double>& p, double p0, double T) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = p[i] - p0 * std::exp(-t[i] / T);
        acc += r * r;
    }
    return acc;
}

} // namespace

PrelFit fit_prel_exponential(const std::vector<double>& t, const std::vector<double>& p,
                             const PrelFitOptions& options) {
    const std::size_t n = t.size();
    if (n != p.size()) throw ParameterError("sample size mismatch");
    if (n < 10) throw ParameterError("p_rel fit needs at least 10 years of data");
    for (double v : p) {
        if (!(v > 0.0)) throw DomainError("p_rel samples must be positive");
    }

    // Log-linear start: ln p = ln p0 - t / T_h.
    double p0 = 1.0;
    double T = 0.0;
    if (options.constrained) {
        double stl = 0.0;
        double stt = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            stl += t[i] * std::log(p[i]);
            stt += t[i] * t[i];
        }
        const double slope = stl / stt;
        if (!(slope < 0.0)) throw FitError("p_rel does not decay; no exponential fit", 0, 0.0);
        T = -1.0 / slope;
    } else {
        double mt = 0.0;
        double ml = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mt += t[i];
            ml += std::log(p[i]);
        }
        mt /= n;
        ml /= n;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += (t[i] - mt) * (std::log(p[i]) - ml);
            sxx += (t[i] - mt) * (t[i] - mt);
        }
        const double slope = sxy / sxx;
        if (!(slope < 0.0)) throw FitError("p_rel does not decay; no exponential fit", 0, 0.0);
        T = -1.0 / slope;
        p0 = std::exp(ml - slope * mt);
    }

    double current = sse(t, p, p0, T);
    double last_step = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        Eigen::MatrixXd J(n, options.constrained ? 1 : 2);
        Eigen::VectorXd r(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-t[i] / T);
            r(i) = p[i] - p0 * e;
            const Eigen::Index row = static_cast<Eigen::Index>(i);
            if (options.constrained) {
                J(row, 0) = p0 * e * t[i] / (T * T);
            } else {
                J(row, 0) = e;
                J(row, 1) = p0 * e * t[i] / (T * T);
            }
        }
        const Eigen::VectorXd delta = J.colPivHouseholderQr().solve(r);
        double lambda = 1.0;
        double np0 = p0;
        double nT = T;
        double next = current;
        bool improved = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            np0 = options.constrained ? p0 : p0 + lambda * delta(0);
            nT = T + lambda * delta(options.constrained ? 0 : 1);
            if (nT > 0.0 && np0 > 0.0) {
                next = sse(t, p, np0, nT);
                if (next <= current) {
                    improved = true;
                    break;
                }
            }
        }
        const double dp = std::abs(np0 - p0) / (1.0 + std::abs(p0));
        const double dT = std::abs(nT - T) / (1.0 + std::abs(T));
        last_step = std::max(dp, dT);
        if (improved) {
            p0 = np0;
            T = nT;
            current = next;
        }
        if (!improved || last_step <= options.tolerance) {
            PrelFit fit;
            fit.p_rel0 = p0;
            fit.T_h = T;
            fit.rms = std::sqrt(current / n);
            fit.iterations = it;
            fit.constrained = options.constrained;
            return fit;
        }
    }
    throw FitError("p_rel fit did not converge in " + std::to_string(options.max_iterations) +
                       " iterations (last relative step " + std::to_string(last_step) + ")",
                   options.max_iterations, last_step);
}

PrelFit fit_prel_exponential(const EconSeries& series, const PrelFitOptions& options) {
    const int from = options.from.value_or(series.first_year());
    const int to = options.to.value_or(series.last_year());
    std::vector<double> t;
    std::vector<double> p;
    for (const auto& r : series.records) {
        if (r.year < from || r.year > to) continue;
        t.push_back(r.year - from);
        p.push_back(r.loans / r.assets);
    }
    PrelFit fit = fit_prel_exponential(t, p, options);
    fit.from = from;
    fit.to = std::min(to, series.last_year());
    return fit;
}

QuadraticFit fit_quadratic_YK(const std::vector<double>& K, const std::vector<double>& Y) {
    const std::size_t n = K.size();
    if (n != Y.size()) throw ParameterError("sample size mismatch");
    if (n < 3) throw ParameterError("quadratic fit needs at least 3 points");
    double scale = 0.0;
    for (double k : K) scale = std::max(scale, std::abs(k));
    if (scale == 0.0) throw DegenerateError("rank-deficient design: all K are zero");

    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = K[i] / scale;
        const Eigen::Index row = static_cast<Eigen::Index>(i);
        X(row, 0) = k * k;
        X(row, 1) = k;
        X(row, 2) = 1.0;
        y(row) = Y[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw DegenerateError("rank-deficient design: K takes fewer than 3 distinct values");
    const Eigen::VectorXd beta = qr.solve(y);

    QuadraticFit fit;
    fit.a_K = -beta(0) / (scale * scale);
    fit.b_K = beta(1) / scale;
    fit.c_K = beta(2);
    fit.n = static_cast<int>(n);
    const Eigen::VectorXd res = y - X * beta;
    fit.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(n));
    return fit;
}

QuadraticFit fit_quadratic_YK(const EconSeries& series, std::optional<int> from, std::optional<int> to) {
    const int lo = std::max(from.value_or(series.first_year()), series.first_year());
    const int hi = std::min(to.value_or(series.last_year()), series.last_year());
    std::vector<double> K;
    std::vector<double> Y;
    for (const auto& r : series.records) {
        if (r.year < lo || r.year > hi) continue;
        K.push_back(r.assets);
        Y.push_back(r.gdp);
    }
    QuadraticFit fit = fit_quadratic_YK(K, Y);
    fit.from = lo;
    fit.to = hi;
    return fit;
}

CapitalExtremes capital_extremes(const QuadraticFit& fit) {
    const double a = fit.a_K;
    const double b = fit.b_K;
    const double c = fit.c_K;
    if (!(a > 0.0)) throw DomainError("no maximum: a_K must be positive (downward parabola)");
    const double disc = b * b + 4.0 * a * c;
    if (disc < 0.0) throw DomainError("fitted parabola has no real roots");
    const double root = std::sqrt(disc);
    CapitalExtremes e;
    e.K_max = b / (2.0 * a);
    e.K_E_low = (b - root) / (2.0 * a);
    e.K_E_high = (b + root) / (2.0 * a);
    e.Y_at_K_max = fit(e.K_max);
    return e;
}

double basket_price(const std::vector<double>& h, const std::vector<double>& a,
                    const std::vector<double>& P) {
    if (h.size() != a.size() || h.size() != P.size()) throw ParameterError("basket size mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) acc += h[j] * a[j] * P[j];
    return acc;
}

std::vector<double> basket_inflation(const std::vector<double>& prices) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        if (prices[i] == 0.0) throw DomainError("basket price is zero");
        out.push_back(prices[i + 1] / prices[i] - 1.0);
    }
    return out;
}

} // namespace macrofield
