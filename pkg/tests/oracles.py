"""Reference values computed independently of the library, in mpmath arithmetic.

Used to generate (and re-check) the frozen constants in the test modules.
"""

import mpmath as mp


def hurwitz_em(s, x, dps=40, N=None, M=None):
    """sum_{n>=0} (n+x)^-s by Euler-Maclaurin with N direct terms and M Bernoulli corrections."""
    with mp.workdps(dps):
        s = mp.mpc(s)
        x = mp.mpf(x)
        N = N or int(40 + 2 * abs(s))
        M = M or int(30 + abs(s))
        head = mp.fsum((n + x) ** (-s) for n in range(N))
        X = N + x
        tail = X ** (1 - s) / (s - 1) + X ** (-s) / 2
        rising = s
        for k in range(1, M + 1):
            # rising = s (s+1) ... (s+2k-2)
            tail += mp.bernoulli(2 * k) / mp.factorial(2 * k) * rising * X ** (-s - 2 * k + 1)
            rising *= (s + 2 * k - 1) * (s + 2 * k)
        return complex(head + tail)


def riemann_em(s, dps=40):
    return hurwitz_em(s, 1, dps)


def _exp_series(c, m):
    out = [mp.mpc(1)]
    for n in range(1, m + 1):
        out.append(out[-1] * c / n)
    return out


def _series_inverse(d, m):
    inv = [1 / d[0]]
    for n in range(1, m + 1):
        inv.append(-mp.fsum(d[i] * inv[n - i] for i in range(1, n + 1)) / d[0])
    return inv


def zeta_k_negative_integer(k, a, z, m, dps=40):
    """zeta_k(-m) = m! (-1)^m sum_j e^{2 pi i j a_j} [lam^m] e^{-(j+z_j) lam} / (1 - e^{2 pi i k a_j - k lam}).

    Valid for a_j outside Z[1/k] (the generating function has no pole at 0).
    """
    with mp.workdps(dps):
        total = mp.mpc(0)
        for j in range(1, k + 1):
            aj = mp.mpc(a[j - 1])
            q = mp.exp(2j * mp.pi * k * aj)
            num = _exp_series(-(j + mp.mpc(z[j - 1])), m)
            ek = _exp_series(mp.mpf(-k), m)
            den = [1 - q * ek[0]] + [-q * ek[n] for n in range(1, m + 1)]
            inv = _series_inverse(den, m)
            coeff = mp.fsum(num[i] * inv[m - i] for i in range(m + 1))
            total += mp.exp(2j * mp.pi * j * aj) * coeff
        return complex(mp.factorial(m) * (-1) ** m * total)


def lerch_direct(a, x, s, dps=30):
    """sum_{n>=1} e^{2 pi i n a} / (n + x)^s for Re s > 1 via mpmath's Lerch transcendent."""
    with mp.workdps(dps):
        q = mp.exp(2j * mp.pi * mp.mpc(a))
        return complex(q * mp.lerchphi(q, s, 1 + mp.mpc(x)))


def loop_integral_integer(j, a, z, k, n, dps=40):
    """Hankel loop integral at integer s = n <= 0: 2 pi i [lam^-n] G_j(lam).

    G_j = e^{-(j+z) lam} / (1 - e^{2 pi i k a - k lam}); the rays cancel at
    integer s, leaving the residue of lam^{n-1} G_j at 0.
    """
    m = -n
    with mp.workdps(dps):
        q = mp.exp(2j * mp.pi * k * mp.mpc(a))
        num = _exp_series(-(j + mp.mpc(z)), m)
        ek = _exp_series(mp.mpf(-k), m)
        den = [1 - q * ek[0]] + [-q * ek[i] for i in range(1, m + 1)]
        inv = _series_inverse(den, m)
        coeff = mp.fsum(num[i] * inv[m - i] for i in range(m + 1))
        return complex(2j * mp.pi * coeff)
