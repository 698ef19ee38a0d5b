#include "hawkes/marks.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

MarkDistribution MarkDistribution::point_mass_one() {
    MarkDistribution d;
    d.type_ = MarkType::PointMassOne;
    return d;
}

MarkDistribution MarkDistribution::two_point(double a, double b, double p) {
    if (a == 0.0 || b == 0.0)
        throw std::invalid_argument("two-point marks: atoms at 0 are not allowed");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("two-point marks: p must lie in [0,1]");
    MarkDistribution d;
    d.type_ = MarkType::TwoPoint;
    d.a_ = a;
    d.b_ = b;
    d.p_ = p;
    const double q = 1.0 - p;
    d.mean_ = p * a + q * b;
    d.theta2_ = p * a * a + q * b * b;
    d.abs1_ = p * std::fabs(a) + q * std::fabs(b);
    d.abs3_ = p * std::pow(std::fabs(a), 3) + q * std::pow(std::fabs(b), 3);
    d.signed2_ = p * a * std::fabs(a) + q * b * std::fabs(b);
    d.validate();
    return d;
}

MarkDistribution MarkDistribution::gaussian(double mean, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("gaussian marks: sd must be positive");
    MarkDistribution d;
    d.type_ = MarkType::Gaussian;
    d.a_ = mean;
    d.b_ = sd;
    d.mean_ = mean;
    d.theta2_ = mean * mean + sd * sd;
    // Folded-normal moments: with a = mean/sd,
    //   E|Y|    = 2 sd phi(a) + mean (2 Phi(a) - 1)
    //   E[Y|Y|] = 2 [(mean^2+sd^2) Phi(a) + mean sd phi(a)] - (mean^2+sd^2)
    //   E|Y|^3  = 2 [(mean^3+3 mean sd^2) Phi(a) + (mean^2+2 sd^2) sd phi(a)]
    //             - (mean^3 + 3 mean sd^2)
    const double a = mean / sd;
    const double cdf = normal_cdf(a);
    const double pdf = normal_pdf(a);
    d.abs1_ = 2.0 * sd * pdf + mean * (2.0 * cdf - 1.0);
    d.signed2_ = 2.0 * (d.theta2_ * cdf + mean * sd * pdf) - d.theta2_;
    const double m3 = mean * mean * mean + 3.0 * mean * sd * sd;
    d.abs3_ = 2.0 * (m3 * cdf + (mean * mean + 2.0 * sd * sd) * sd * pdf) - m3;
    d.validate();
    return d;
}

MarkDistribution MarkDistribution::lognormal(double logmean, double logsd) {
    if (!(logsd > 0.0)) throw std::invalid_argument("lognormal marks: logsd must be positive");
    MarkDistribution d;
    d.type_ = MarkType::Lognormal;
    d.a_ = logmean;
    d.b_ = logsd;
    const double s2 = logsd * logsd;
    d.mean_ = std::exp(logmean + 0.5 * s2);
    d.theta2_ = std::exp(2.0 * logmean + 2.0 * s2);
    d.abs1_ = d.mean_;
    d.abs3_ = std::exp(3.0 * logmean + 4.5 * s2);
    d.signed2_ = d.theta2_;
    d.validate();
    return d;
}

MarkDistribution MarkDistribution::empirical(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("empirical marks: no values");
    MarkDistribution d;
    d.type_ = MarkType::Empirical;
    double m = 0.0, m2 = 0.0, a1 = 0.0, a3 = 0.0, s2 = 0.0;
    for (double v : values) {
        if (v == 0.0)
            throw std::invalid_argument("empirical marks: atoms at 0 are not allowed");
        if (!std::isfinite(v))
            throw std::invalid_argument("empirical marks: values must be finite");
        m += v;
        m2 += v * v;
        a1 += std::fabs(v);
        a3 += std::fabs(v) * v * v;
        s2 += v * std::fabs(v);
    }
    const double n = static_cast<double>(values.size());
    d.mean_ = m / n;
    d.theta2_ = m2 / n;
    d.abs1_ = a1 / n;
    d.abs3_ = a3 / n;
    d.signed2_ = s2 / n;
    d.values_ = std::move(values);
    d.validate();
    return d;
}

void MarkDistribution::validate() const {
    for (double x : {mean_, theta2_, abs1_, abs3_, signed2_})
        if (!std::isfinite(x))
            throw std::invalid_argument("mark distribution: non-finite moment");
}

double MarkDistribution::sample(Rng& rng) const {
    switch (type_) {
        case MarkType::PointMassOne:
            return 1.0;
        case MarkType::TwoPoint:
            return rng.uniform() < p_ ? a_ : b_;
        case MarkType::Gaussian:
            return a_ + b_ * rng.normal();
        case MarkType::Lognormal:
            return std::exp(a_ + b_ * rng.normal());
        case MarkType::Empirical: {
            const std::size_t i =
                static_cast<std::size_t>(rng.uniform() * static_cast<double>(values_.size()));
            return values_[i < values_.size() ? i : values_.size() - 1];
        }
    }
    return 1.0;
}

}  // namespace hawkes
