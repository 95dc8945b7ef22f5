#!/usr/bin/env python3
"""Regenerate frozen_values.hpp from extended-precision mpmath evaluations.

Dev-only. The C++ build never runs this; the header it writes is checked in.
Usage: python3 tests/fixtures/gen_fixtures.py > tests/fixtures/frozen_values.hpp
"""

import mpmath as mp

mp.mp.dps = 40


def brute_2f1(a, b, c, z, terms):
    term = mp.mpc(1)
    total = mp.mpc(1)
    for n in range(terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
    return total


def kernels(H, M, r, t):
    H, M, r, t = mp.mpf(H), mp.mpc(M), mp.mpf(r), mp.mpf(t)
    e = mp.exp(-H * t)
    D = (1 + e) ** 2 - H**2 * r**2
    z = ((1 - e) ** 2 - H**2 * r**2) / D
    q = M / H
    f1 = mp.hyp2f1(0.5 - q, 0.5 - q, 1, z)
    f2 = mp.hyp2f1(1.5 - q, 1.5 - q, 2, z)
    k1 = mp.power(4, -q) * mp.exp(M * t) * mp.power(D, q - 0.5) * f1
    k0 = -mp.power(4, -q) * e * mp.exp(M * t) * mp.power(D, q - 2.5) * (
        mp.exp(H * t) * D * (-H**2 * M * r**2 + M * e**2 + H * e + H - M) * f1
        + (H - 2 * M) ** 2 / H * (-H**2 * r**2 + e**2 - 1) * f2
    )
    return k0, k1


def cxx(name, value):
    value = mp.mpc(value)
    re = mp.nstr(value.real, 20, min_fixed=-1, max_fixed=-1)
    im = mp.nstr(value.imag, 20, min_fixed=-1, max_fixed=-1)
    return f"inline const Complex {name}{{{re}, {im}}};"


def main():
    out = []
    out.append("#pragma once")
    out.append("// Generated by gen_fixtures.py (mpmath, 40 digits). Do not edit by hand.")
    out.append('#include "dskg/types.hpp"')
    out.append("namespace fixtures {")
    out.append("using dskg::Complex;")

    a = mp.mpc(0.5, -0.3)
    out.append(cxx("kHyp2f1Series200", brute_2f1(a, a, 1, mp.mpf(0.5), 200)))

    # Near z = 1: plain 1 - z reflection and the logarithmic variants.
    near = [
        ("kHypNearOneGeneric", (0.2, 0.2, 1, 0.97)),
        ("kHypNearOneLog0", (mp.mpc(0.3, 0.2), mp.mpc(0.7, -0.2), 1, 0.98)),
        ("kHypNearOneLogPlus1", (mp.mpc(0.3, 0.2), mp.mpc(0.7, -0.2), 2, 0.99)),
        ("kHypNearOneLogMinus1", (mp.mpc(0.3, 0.2), mp.mpc(1.7, -0.2), 1, 0.96)),
        ("kHypNearOneImag", (mp.mpc(0.5, -1.3228756555322954), mp.mpc(0.5, -1.3228756555322954), 1, 0.999)),
        ("kHypNegativeZ", (mp.mpc(0.4, 0.1), mp.mpc(1.1, 0), 1.7, -0.8)),
    ]
    for name, (aa, bb, cc, zz) in near:
        out.append(cxx(name, mp.hyp2f1(aa, bb, cc, mp.mpf(zz))))

    k0, k1 = kernels(1, 0.3, 0.2, 0.5)
    out.append(cxx("kK0_H1_M03_r02_t05", k0))
    out.append(cxx("kK1_H1_M03_r02_t05", k1))

    # m = 2, H = 1: M = i sqrt(7)/2.
    Mi = mp.mpc(0, mp.sqrt(7) / 2)
    k0, k1 = kernels(1, Mi, 0.2, 0.5)
    out.append(cxx("kK0_H1_m2_r02_t05", k0))
    out.append(cxx("kK1_H1_m2_r02_t05", k1))
    out.append(cxx("kComb_H1_m2_r02_t05", 2 * k0 + 3 * k1))

    # Large t close to the light cone: exercises the 1 - z complement.
    t = mp.mpf(12)
    r = (1 - mp.exp(-t)) * mp.mpf("0.999")
    k0, k1 = kernels(1, 0.3, r, t)
    out.append(cxx("kK0_H1_M03_lateCone", k0))
    out.append(cxx("kK1_H1_M03_lateCone", k1))
    k0, k1 = kernels(2, mp.mpc(0, 1.5), mp.mpf("0.1"), mp.mpf(3))
    out.append(cxx("kK0_H2_Mi15_r01_t3", k0))
    out.append(cxx("kK1_H2_Mi15_r01_t3", k1))

    out.append(cxx("kErfcHalfSqrtPi", mp.sqrt(mp.pi) * mp.erfc(0.5)))
    out.append(cxx("kGammaInc_m05_2", mp.gammainc(-0.5, 2)))
    out.append(cxx("kGammaInc_0_05", mp.gammainc(0, 0.5)))
    out.append(cxx("kGammaInc_3p5_1", mp.gammainc(3.5, 1)))
    out.append(cxx("kGammaInc_m2p3_4", mp.gammainc(-2.3, 4)))

    out.append("}  // namespace fixtures")
    print("\n".join(out))


if __name__ == "__main__":
    main()
