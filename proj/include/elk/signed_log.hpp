#pragma once

#include <cmath>
#include <limits>

namespace elk {

// Signed magnitude stored in natural-log space, so products of factorially
// large factors (He_n at large argument, Gamma(N+1,x), N!) never overflow.
// Exact zero is {log_abs = -inf, sign = 0} and propagates through arithmetic.
struct SignedLog {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    SignedLog() = default;
    SignedLog(double la, int s) : log_abs(la), sign(s) {
        if (s == 0 || la == -std::numeric_limits<double>::infinity()) {
            log_abs = -std::numeric_limits<double>::infinity();
            sign = 0;
        }
    }

    static SignedLog zero() { return {}; }

    static SignedLog from(double x) {
        if (x == 0.0) return {};
        return {std::log(std::abs(x)), x > 0 ? 1 : -1};
    }

    bool is_zero() const { return sign == 0; }

    // May overflow to +-inf or underflow to 0; callers guard where it matters.
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);
    }

    SignedLog operator-() const { return {log_abs, -sign}; }

    friend SignedLog operator*(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.log_abs + b.log_abs, a.sign * b.sign};
    }

    friend SignedLog operator*(const SignedLog& a, double b) { return a * from(b); }
    friend SignedLog operator*(double a, const SignedLog& b) { return from(a) * b; }

    friend SignedLog operator+(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        const SignedLog& hi = a.log_abs >= b.log_abs ? a : b;
        const SignedLog& lo = a.log_abs >= b.log_abs ? b : a;
        const double d = lo.log_abs - hi.log_abs;  // <= 0
        if (hi.sign == lo.sign) return {hi.log_abs + std::log1p(std::exp(d)), hi.sign};
        if (d == 0.0) return {};
        return {hi.log_abs + std::log1p(-std::exp(d)), hi.sign};
    }

    friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }
};

// Kahan-compensated accumulator for SignedLog-sized terms. Mantissas are kept
// against a running log scale so cancellation between huge terms is resolved
// at full double precision instead of through log1p/exp round trips.
class ScaledKahanSum {
public:
    // adds mantissa * exp(log_scale)
    void add(double mantissa, double log_scale) {
        if (mantissa == 0.0) return;
        const double term_log = log_scale + std::log(std::abs(mantissa));
        if (term_log > max_term_log_) max_term_log_ = term_log;
        if (scale_ == -std::numeric_limits<double>::infinity()) {
            scale_ = log_scale;
            sum_ = mantissa;
            comp_ = 0.0;
            return;
        }
        if (log_scale > scale_) {
            const double f = std::exp(scale_ - log_scale);
            sum_ *= f;
            comp_ *= f;
            scale_ = log_scale;
        }
        const double m = mantissa * std::exp(log_scale - scale_);
        const double y = m - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }

    void add(const SignedLog& v) {
        if (v.sign != 0) add(static_cast<double>(v.sign), v.log_abs);
    }

    SignedLog total() const {
        if (sum_ == 0.0 || scale_ == -std::numeric_limits<double>::infinity()) return {};
        return {scale_ + std::log(std::abs(sum_)), sum_ > 0 ? 1 : -1};
    }

    // log of the largest |term| seen; -inf if nothing was added
    double max_term_log() const { return max_term_log_; }

private:
    double scale_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double comp_ = 0.0;
    double max_term_log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace elk
