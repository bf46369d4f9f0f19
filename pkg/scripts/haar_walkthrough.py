"""Walk through the Haar case end to end and print every intermediate value.

    python3 scripts/haar_walkthrough.py
"""

import numpy as np

from wframe import (
    analyze,
    extend_algorithm_a,
    generate_mask,
    indicator,
    parseval_check,
    refinable_hat,
    verify_uep,
    wavelet_hat,
)
from wframe.extension import polyphase_value_table
from wframe.frames import approx_order_report, time_domain


def fmt(v):
    return np.array2string(np.asarray(v), precision=6, suppress_small=True)


def main():
    m0 = generate_mask([1, 0], 2)
    print("scaling mask coefficients", fmt(m0.coeffs))

    table = polyphase_value_table(m0, 1)
    print("polyphase column for l=0 ", fmt(table.columns[0]))

    fam = extend_algorithm_a(m0, 1)
    print("completion matrix\n", fmt(fam.table.unitary[0]))
    print("wavelet mask coefficients", fmt(fam.masks[1].coeffs))
    rep = verify_uep(fam)
    print(f"unitarity check: pass={rep.passed} max_dev={rep.max_dev:.3g}")

    g = refinable_hat(m0, 2)
    print("ghat on U_-2           ", fmt(g.values))
    psi = time_domain(wavelet_hat(fam, 1, 1))
    print("psi on U (cells of U_1)", fmt(psi.values.real))

    f = indicator(2, 1)
    t = analyze(f, fam)
    print(f"signal 1_U1: J={t.J}, base coefficients {fmt(t.base)}")
    for nu, j, k, c in t.rows():
        if nu and abs(c) > 0:
            print(f"  <f, psi_({j},{k})> = {c.real:.6f}")
    p = parseval_check(f, fam, table=t)
    print(f"parseval: base={p.base_energy:.6f} total={p.total_wavelet_energy:.6f} ||f||^2={p.signal_energy:.6f}")
    for j, e, b in approx_order_report(f, fam, table=t):
        print(f"  E_{j} = {e:.6f}  (bound {b:.6f})")


if __name__ == "__main__":
    main()
