"""Figure rendering for solver traces and verification reports.

Everything draws to files through the Agg backend; the CLI only imports
this module when a --plot path is requested.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# semilogy cannot show exact zeros; clip residuals at a display floor
_FLOOR = 1e-18


def save_trace_figure(traces, path, eps=None) -> None:
    """Residual curves for one or more solver runs.

    traces is a sequence of (label, SolverTrace).  Constraint defect is
    drawn solid, aux distance dashed, both on a log scale.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    many = len(traces) > 6
    for label, tr in traces:
        if not tr.residuals:
            continue
        ks = range(1, len(tr.residuals) + 1)
        cons = [max(r[0], _FLOOR) for r in tr.residuals]
        aux = [max(r[1], _FLOOR) for r in tr.residuals]
        kwargs = {"lw": 1.0, "alpha": 0.6} if many else {"lw": 1.4}
        line, = ax.semilogy(ks, cons, label=None if many else f"{label} constraint", **kwargs)
        ax.semilogy(ks, aux, ls="--", color=line.get_color(),
                    label=None if many else f"{label} aux distance", **kwargs)
    if eps is not None:
        ax.axhline(eps, color="k", lw=0.8, ls=":", label="eps")
    ax.set_xlabel("iteration")
    ax.set_ylabel("residual")
    ax.set_title("feasibility residuals")
    if not many or eps is not None:
        ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_verify_figure(records, path) -> None:
    """Two-panel summary of a verification run.

    Left: library objective vs oracle minimum per input.  Right: optimality
    gaps against the oracle and against the best feasible sample.
    """
    idx = [r["index"] for r in records]
    obj = [r["objective"] for r in records]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.2))

    ax1.plot(idx, obj, "o", ms=3, label="library objective")
    with_oracle = [(r["index"], r["oracle_value"]) for r in records
                   if r["oracle_value"] is not None]
    if with_oracle:
        ax1.plot([i for i, _ in with_oracle], [v for _, v in with_oracle],
                 "x", ms=4, label="oracle minimum")
    ax1.set_xlabel("input index")
    ax1.set_ylabel("objective")
    ax1.set_title("objective vs oracle")
    ax1.legend(fontsize=8)
    ax1.grid(True, alpha=0.3)

    og = [(r["index"], abs(r["oracle_gap"])) for r in records
          if r["oracle_gap"] is not None]
    sg = [(r["index"], abs(r["sample_gap"])) for r in records]
    if og:
        ax2.semilogy([i for i, _ in og], [max(v, _FLOOR) for _, v in og],
                     "x", ms=4, label="|oracle gap|")
    ax2.semilogy([i for i, _ in sg], [max(v, _FLOOR) for _, v in sg],
                 "o", ms=3, label="|sample gap|")
    ax2.set_xlabel("input index")
    ax2.set_ylabel("gap")
    ax2.set_title("optimality gaps")
    ax2.legend(fontsize=8)
    ax2.grid(True, which="both", alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
