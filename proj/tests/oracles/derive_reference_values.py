"""Independent high-precision reference values frozen into the unit tests.

Run: python3 tests/oracles/derive_reference_values.py
Uses mpmath only; none of the library code is involved.
"""
from mpmath import mp, mpf, sqrt, floor, zeta, pi, gamma, factorial

mp.dps = 40
S2 = sqrt(2)
PHI = (1 + sqrt(5)) / 2


def alpha(theta, h1, h2, n1, n2):
    return sqrt(h1 * (2 * n1 - theta * h1)) - sqrt(h2 * (2 * n2 - theta * h2))


def psi(t):
    return t - floor(t) - mpf(1) / 2


def psi_sum(l, theta, x):
    c = mpf(4) / (2**l * factorial(l - 1))
    s = 0
    m = 1
    while theta * m * m <= x:
        s += m * (x - theta * m * m) ** (l - 1) * psi(x / (2 * m) - theta * m / 2 - mpf(l) / 2)
        m += 1
    return -c * s


def series_constant(l, theta, H=20000):
    # Σ_h h^(-1/2) Σ_{r > θh} (1 - θh/n)^(2l-2) n^(-5/2),  n = 2r - θh, inner sums via Hurwitz ζ
    def row(h):
        r0 = floor(theta * h) + 1
        a = r0 - theta * h / 2  # n = 2(r - θh/2)
        t = theta * h
        tot = 0
        # expand (1 - t/n)^(2l-2) n^(-5/2) = Σ_k C(2l-2,k) (-t)^k n^(-5/2-k)
        from mpmath import binomial
        for k in range(2 * l - 1):
            s = mpf(5) / 2 + k
            tot += binomial(2 * l - 2, k) * (-t) ** k * 2 ** (-s) * zeta(s, a)
        return tot / sqrt(h)

    head = sum(row(h) for h in range(1, H + 1))
    # tail: row(h) ~ h^(-1/2) ∫ ... ; use the average over the fractional part:
    # Σ_{r>θh} f(2r-θh) ≈ (1/2)∫_{θh}^∞ f(n) dn for the smooth f, which gives
    # c_l θ^(-3/2) h^(-2) / 2 with c_l = B(3/2, 2l-1) plus O(h^-3)
    from mpmath import beta as B
    c = B(mpf(3) / 2, 2 * l - 1)
    tail = c / 2 * theta ** (-mpf(3) / 2) * zeta(2, H + 1)
    return head + tail


def weyl_coefficient(l, theta):
    n = 2 * l + 1
    volB = pi ** (mpf(n) / 2) / gamma(mpf(n) / 2 + 1)
    return volB * sqrt(2 * pi / theta) / (2 * pi) ** n


if __name__ == "__main__":
    print("alpha(sqrt2;1,1,2,3)   ", alpha(S2, 1, 1, 2, 3))
    print("psi_sum l=1 x=4        ", psi_sum(1, S2, 4))
    print("psi_sum l=2 x=4        ", psi_sum(2, S2, 4))
    print("psi_sum l=1 x=100 phi  ", psi_sum(1, PHI, 100))
    print("psi_sum l=3 x=50       ", psi_sum(3, S2, 50))
    print("weyl A l=1 sqrt2       ", weyl_coefficient(1, S2))
    print("weyl A l=2 sqrt2       ", weyl_coefficient(2, S2))
    for H in (5000, 20000):
        print("C(1,sqrt2) H=%d      " % H, series_constant(1, S2, H))
    print("C(2,sqrt2)             ", series_constant(2, S2, 20000))
    print("C(1,golden)            ", series_constant(1, PHI, 20000))
