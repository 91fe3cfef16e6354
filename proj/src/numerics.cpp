#include "vtmix/numerics.hpp"

#include <cmath>

namespace vtmix {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
constexpr double kInvSqrt2 = 0.7071067811865475244;    // 1/sqrt(2)

}  // namespace

double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    // erfc keeps the lower tail in full relative precision; the symmetric
    // call covers the upper tail when callers mirror their arguments.
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_quantile(double u) {
    // Acklam's rational initializer (|error| < 1.2e-9) followed by one
    // Newton step against the erfc-based CDF, which lands within a few ulp.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    double x;
    if (u < plow) {
        double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        double q = u - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
             a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r +
             1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
              c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    double err = std_normal_cdf(x) - u;
    x -= err / std_normal_pdf(x);
    return x;
}

double truncated_mass(double mean, double a, double b) {
    double za = a - mean;
    double zb = b - mean;
    if (za >= 0.0) {
        // Interval in the upper tail: mirror so both CDF values are small
        // and the difference loses no leading digits.
        return std_normal_cdf(-za) - std_normal_cdf(-zb);
    }
    return std_normal_cdf(zb) - std_normal_cdf(za);
}

double truncated_first_moment(double mean, double a, double b) {
    double za = a - mean;
    double zb = b - mean;
    double pa = std::isinf(za) ? 0.0 : std_normal_pdf(za);
    double pb = std::isinf(zb) ? 0.0 : std_normal_pdf(zb);
    return mean * truncated_mass(mean, a, b) - (pb - pa);
}

}  // namespace vtmix
