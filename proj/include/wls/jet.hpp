#pragma once

#include <array>
#include <cmath>

namespace wls {

// Truncated bivariate Taylor polynomial of total order N in (r, theta).
template <int N>
class Jet {
public:
    static constexpr int kSize = (N + 1) * (N + 2) / 2;

    Jet() { c_.fill(0.0); }
    Jet(double v) {  // NOLINT: implicit constants are convenient in formulas
        c_.fill(0.0);
        c_[0] = v;
    }

    static Jet variable(double v, int which) {
        Jet j(v);
        if constexpr (N >= 1) j.at(which == 0 ? 1 : 0, which == 0 ? 0 : 1) = 1.0;
        return j;
    }

    static constexpr int index(int i, int j) {
        const int k = i + j;
        return k * (k + 1) / 2 + j;
    }

    double& at(int i, int j) { return c_[index(i, j)]; }
    double at(int i, int j) const { return c_[index(i, j)]; }
    double value() const { return c_[0]; }

    // d^{i+j} / dr^i dtheta^j at the expansion point.
    double partial(int i, int j) const { return at(i, j) * fact(i) * fact(j); }

    template <int M>
    Jet<M> truncate() const {
        static_assert(M <= N);
        Jet<M> out;
        for (int k = 0; k <= M; ++k)
            for (int j = 0; j <= k; ++j) out.at(k - j, j) = at(k - j, j);
        return out;
    }

    Jet<N - 1> d_r() const {
        Jet<N - 1> out;
        for (int k = 0; k < N; ++k)
            for (int j = 0; j <= k; ++j) out.at(k - j, j) = (k - j + 1) * at(k - j + 1, j);
        return out;
    }

    Jet<N - 1> d_theta() const {
        Jet<N - 1> out;
        for (int k = 0; k < N; ++k)
            for (int j = 0; j <= k; ++j) out.at(k - j, j) = (j + 1) * at(k - j, j + 1);
        return out;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) { return a *= -1.0; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet out;
        for (int ka = 0; ka <= N; ++ka)
            for (int ja = 0; ja <= ka; ++ja) {
                const double va = a.at(ka - ja, ja);
                if (va == 0.0) continue;
                for (int kb = 0; kb + ka <= N; ++kb)
                    for (int jb = 0; jb <= kb; ++jb) out.at(ka - ja + kb - jb, ja + jb) += va * b.at(kb - jb, jb);
            }
        return out;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
    friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

    // f(x0 + h) = sum_k f^(k)(x0) h^k / k!, given f^(k)(x0) for k = 0..N.
    static Jet compose(const Jet& x, const std::array<double, N + 1>& derivs) {
        Jet h = x;
        h.c_[0] = 0.0;
        Jet out(derivs[0]);
        Jet hp(1.0);
        for (int k = 1; k <= N; ++k) {
            hp = hp * h;
            out += hp * (derivs[k] / fact(k));
        }
        return out;
    }

    // Both work on x / x0 so that 1 / x0^k cannot overflow for tiny x0.
    friend Jet reciprocal(const Jet& x) {
        std::array<double, N + 1> d{};
        const double x0 = x.value();
        double f = 1.0;
        for (int k = 0; k <= N; ++k) {
            d[k] = f;
            f *= -(k + 1);
        }
        return compose(x * (1.0 / x0), d) * (1.0 / x0);
    }

    friend Jet exp(const Jet& x) {
        std::array<double, N + 1> d{};
        d.fill(std::exp(x.value()));
        return compose(x, d);
    }

    friend Jet log(const Jet& x) {
        std::array<double, N + 1> d{};
        const double x0 = x.value();
        double f = 1.0;
        for (int k = 1; k <= N; ++k) {
            d[k] = f;
            f *= -k;
        }
        Jet out = compose(x * (1.0 / x0), d);
        out.c_[0] = std::log(x0);
        return out;
    }

    friend Jet sin(const Jet& x) {
        std::array<double, N + 1> d{};
        const double s = std::sin(x.value()), c = std::cos(x.value());
        for (int k = 0; k <= N; ++k) d[k] = (k % 4 == 0) ? s : (k % 4 == 1) ? c : (k % 4 == 2) ? -s : -c;
        return compose(x, d);
    }

    friend Jet cos(const Jet& x) {
        std::array<double, N + 1> d{};
        const double s = std::sin(x.value()), c = std::cos(x.value());
        for (int k = 0; k <= N; ++k) d[k] = (k % 4 == 0) ? c : (k % 4 == 1) ? -s : (k % 4 == 2) ? -c : s;
        return compose(x, d);
    }

    friend Jet pow(const Jet& x, double e) {
        std::array<double, N + 1> d{};
        const double x0 = x.value();
        double coef = 1.0;
        for (int k = 0; k <= N; ++k) {
            d[k] = coef * std::pow(x0, e - k);
            coef *= (e - k);
        }
        return compose(x, d);
    }

private:
    static constexpr double fact(int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    }

    std::array<double, kSize> c_;
};

template <>
class Jet<-1>;

}  // namespace wls
