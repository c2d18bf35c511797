"""Random sweep over the closed-form families counting, for every bound,
how often its hypothesis holds and how often the inequality then fails.

    python3 scripts/bound_sweep.py --cases 500 --seed 1
"""

import argparse
import math
from collections import Counter

import numpy as np

from wgie.bounds import Theorem, all_bounds
from wgie.distributions import Beta1, Exponential, Gamma, ParetoI, Power, Uniform, Window
from wgie.entropy import EntropyOrder


def random_case(rng):
    beta = rng.uniform(1.0, 2.5)
    order = EntropyOrder(rng.uniform(beta - 0.98, beta - 0.02), beta)
    fam = rng.integers(6)
    if fam == 0:
        a = rng.uniform(0, 2)
        m = Uniform(a, a + rng.uniform(0.5, 5))
        lo, hi = m.a, m.b
    elif fam == 1:
        m = Exponential(rng.uniform(0.2, 5))
        lo, hi = 0.0, 8.0 / m.theta
    elif fam == 2:
        m = Power(rng.uniform(0.5, 3), rng.uniform(0.3, 4))
        lo, hi = 0.0, m.a
    elif fam == 3:
        m = Beta1(rng.uniform(0.3, 4))
        lo, hi = 0.0, 1.0
    elif fam == 4:
        m = ParetoI(rng.uniform(0.5, 2), rng.uniform(0.5, 5))
        lo, hi = m.a, 6 * m.a
    else:
        m = Gamma(rng.uniform(0.3, 6), rng.uniform(0.3, 3))
        lo, hi = 0.0, (m.shape + 6 * math.sqrt(m.shape)) / m.rate
    span = hi - lo
    t1 = rng.uniform(lo + 0.01 * span, lo + 0.9 * span)
    t2 = rng.uniform(t1 + 0.05 * span, max(hi, t1 + 0.06 * span))
    return m, Window(float(t1), float(min(t2, hi))), order


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=300)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    held, failed, uninformative = Counter(), Counter(), Counter()
    worst = {}
    for _ in range(args.cases):
        m, w, o = random_case(rng)
        for r in all_bounds(m, w, o):
            if not r.hypothesis_holds:
                continue
            held[r.theorem_id] += 1
            if not r.informative:
                uninformative[r.theorem_id] += 1
            elif not r.satisfied:
                failed[r.theorem_id] += 1
                if r.margin < worst.get(r.theorem_id, (0.0,))[0]:
                    worst[r.theorem_id] = (r.margin, str(m), w.as_tuple(), (o.alpha, o.beta))
    print(f"{'bound':26} {'hyp held':>8} {'failed':>7} {'-inf rhs':>8}")
    for t in Theorem:
        print(f"{t.value:26} {held[t]:8d} {failed[t]:7d} {uninformative[t]:8d}")
    for t, (margin, m, w, o) in worst.items():
        print(f"worst {t.value}: margin {margin:.4g} at {m}, window {w}, order {o}")


if __name__ == "__main__":
    main()
