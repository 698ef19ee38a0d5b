#ifndef HAWKES_MARKS_HPP
#define HAWKES_MARKS_HPP

#include <vector>

#include "hawkes/rng.hpp"

namespace hawkes {

enum class MarkType { PointMassOne, TwoPoint, Gaussian, Lognormal, Empirical };

// Jump-size law nu with its moments cached at construction: the bound
// estimators consume m, theta^2 = E[Y^2], E|Y|, E|Y|^3 and E[Y|Y|]
// constantly. No variant may place an atom at 0, and all cached moments
// must be finite; violations throw std::invalid_argument.
// Immutable after construction; sampling needs an exclusive Rng per worker.
class MarkDistribution {
  public:
    static MarkDistribution point_mass_one();
    // P(Y=a) = p, P(Y=b) = 1-p.
    static MarkDistribution two_point(double a, double b, double p);
    static MarkDistribution gaussian(double mean, double sd);
    static MarkDistribution lognormal(double logmean, double logsd);
    static MarkDistribution empirical(std::vector<double> values);

    MarkType type() const { return type_; }

    double mean() const { return mean_; }                    // m
    double second_moment() const { return theta2_; }         // theta^2
    double abs_first_moment() const { return abs1_; }        // E|Y|
    double abs_third_moment() const { return abs3_; }        // E|Y|^3
    double signed_square_moment() const { return signed2_; }  // E[Y|Y|]

    bool is_point_mass_one() const { return type_ == MarkType::PointMassOne; }

    double sample(Rng& rng) const;

  private:
    MarkDistribution() = default;
    void validate() const;

    MarkType type_ = MarkType::PointMassOne;
    double a_ = 0.0, b_ = 0.0, p_ = 0.0;  // variant parameters
    std::vector<double> values_;
    double mean_ = 1.0, theta2_ = 1.0, abs1_ = 1.0, abs3_ = 1.0, signed2_ = 1.0;
};

}  // namespace hawkes

#endif
