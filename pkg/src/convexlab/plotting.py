"""Static SVG rendering of sweep results."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_sweep(records, out_path, fit=None, title: str | None = None) -> None:
    """Log-log scatter of (deficit, distance deficit) with the fitted line.

    Records outside the positive quadrant cannot appear on log axes and
    are dropped; the fit line spans the plotted deficit range.
    """
    pts = [(r.epsilon, r.delta) for r in records
           if r.epsilon > 0.0 and r.delta > 0.0]
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if pts:
        eps, delta = np.array(pts).T
        ax.loglog(eps, delta, "o", color="tab:blue", label="bodies")
        if fit is not None:
            span = np.array([eps.min(), eps.max()])
            ax.loglog(span, np.exp(fit.intercept) * span**fit.slope,
                      "-", color="tab:orange",
                      label=f"slope {fit.slope:.3f}")
        ax.legend()
    ax.set_xlabel("volume-product deficit")
    ax.set_ylabel("Banach-Mazur deficit")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)
