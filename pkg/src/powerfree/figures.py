"""Figure rendering for the report pipeline.

Every function takes rows already computed elsewhere and writes one PNG.
Rendering is a presentation layer only: nothing here feeds back into the
numeric results, and the delimited files stay the source of record.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

# Strip the version-dependent Software chunk so reruns produce stable bytes.
_PNG_META = {"Software": None}


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def error_decay_figure(rows: Sequence[tuple[int, int, float]], slope: float, path: str) -> None:
    """Log-log absolute error of the pair count against its main term.

    rows: (x, count, main_term).  The fitted slope is drawn as a guide line
    anchored at the first point.
    """
    xs = [r[0] for r in rows]
    errs = [max(abs(r[1] - r[2]), 0.5) for r in rows]  # clamp so log stays finite
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(xs, errs, "o-", color="#1f6fb2", label="observed |error|")
    anchor = errs[0]
    guide = [anchor * (x / xs[0]) ** slope for x in xs]
    ax.loglog(xs, guide, "--", color="#999999", label=f"slope {slope:.3f}")
    ax.set_xlabel("x")
    ax.set_ylabel("|count - main term|")
    ax.set_title("Pair count error decay")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def squarefull_growth_figure(rows: Sequence[tuple[int, int, float]], path: str) -> None:
    """Empirical exponent of the consecutive square-full pair count.

    rows: (x, pair count, log count / log x) as produced by growth_rows;
    rows with zero pairs (nan exponent) are skipped.  The conjectural
    exponent bound 29/100 is drawn for reference.
    """
    kept = [r for r in rows if r[2] == r[2]]  # drop nan
    xs = [r[0] for r in kept]
    exps = [r[2] for r in kept]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(xs, exps, "o-", color="#2a7f3f", label="log pairs / log x")
    ax.axhline(0.29, linestyle="--", color="#999999", label="bound 29/100")
    ax.set_xlabel("x")
    ax.set_ylabel("empirical exponent")
    ax.set_title("Consecutive square-full pairs")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def pell_density_figure(rows: Sequence[tuple], profile, X: int, path: str) -> None:
    """Empirical Pell-count exponent against the predicted profile.

    rows: (theta, count, density) at one fixed X; profile maps an exact theta
    to the predicted exponent.  Counts of zero plot as exponent zero.
    """
    thetas = [float(r[0]) for r in rows]
    logX = math.log(X)
    emp = [math.log(max(r[1], 1)) / logX for r in rows]
    pred = [float(profile(r[0])) for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(thetas, emp, "o-", color="#b2541f", label=f"empirical, X={X}")
    ax.plot(thetas, pred, "--", color="#555555", label="predicted profile")
    ax.set_xlabel("theta")
    ax.set_ylabel("log count / log X")
    ax.set_title("Pell solutions below a power threshold")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def rank_deficiency_figure(rows: Sequence[tuple[str, int, int, float]], path: str) -> None:
    """Fraction of occupied intervals yielding a vanishing certificate.

    rows: (subdivision label, occupied, certified, fraction).
    """
    labels = [r[0] for r in rows]
    fracs = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(labels, fracs, color="#5a4fb2", width=0.6)
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("subdivision parameter")
    ax.set_ylabel("certified fraction")
    ax.set_title("Interval certificates vs subdivision")
    for label, frac in zip(labels, fracs):
        ax.annotate(f"{frac:.2f}", (label, frac), ha="center", va="bottom")
    fig.tight_layout()
    _save(fig, path)
