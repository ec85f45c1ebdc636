"""How the HMC advantage over random-walk MH grows with dimension.

Both samplers target an isotropic generalized Gaussian in 2, 3, and 4
dimensions.  Convergence is declared when the multivariate histogram MSE
against a large set of exact direct draws stays below the accuracy a
500-draw direct sample achieves on the same reference: an absolute anchor,
so the bar does not move with the iteration budget.

Run as:  python demos/dimension_scaling.py
"""

import contextlib
import io
import tempfile

from nshmc.cli import cmd_exp2

ITERATIONS = 10000
P = 1.0


def main():
    print(
        f"target: exp(-sum |x_i|^{P:g}), budget {ITERATIONS} iterations, "
        "threshold = 500-draw direct-sample accuracy\n"
    )
    print(f"{'dim':>3} {'HMC reaches at':>15} {'RWMH reaches at':>16} {'gap':>6}")
    for dim in (2, 3, 4):
        with tempfile.TemporaryDirectory() as scratch:
            with contextlib.redirect_stdout(io.StringIO()):
                res = cmd_exp2(
                    dim=dim,
                    p=P,
                    lam=1.0,
                    iterations=ITERATIONS,
                    seed=0,
                    out_dir=scratch,
                )
        t_ns, ok_ns = res["thresholds"]["nshmc2"]
        t_rw, ok_rw = res["thresholds"]["rwmh"]
        ns = f"{t_ns}" if ok_ns else f">{t_ns}"
        rw = f"{t_rw}" if ok_rw else f">{t_rw}"
        print(f"{dim:>3} {ns:>15} {rw:>16} {t_rw - t_ns:>6}")

    print(
        "\nThe random walk must shrink its effective step as dimension grows,"
        "\nso its time to threshold inflates much faster than the HMC chain's."
        "\nSingle seeds are noisy at neighboring dimensions; averaged over"
        "\nseeds the 4-D gap clearly exceeds the 2-D gap."
    )


if __name__ == "__main__":
    main()
