"""Figure rendering for CLI reports.

Each command's report can be rendered to a PNG next to its delimited
output.  Values arrive as mpmath reals; they are clipped into the double
range before handing off to matplotlib (residuals can exceed 1e300 or
undershoot 1e-300 during divergence demos and deep convergence).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

TINY = 1e-290
HUGE = 1e290


def as_float(x) -> float:
    value = float(x)
    if value > HUGE:
        return HUGE
    if 0 < value < TINY:
        return TINY
    if value < -HUGE:
        return -HUGE
    return value


def save_convergence_figure(orders, e_hats, residuals, path, wavefunction=None, title=None):
    """Eigenvalue and residual versus order; optional wavefunction panel."""
    panels = 3 if wavefunction is not None else 2
    fig, axes = plt.subplots(panels, 1, figsize=(6.4, 2.6 * panels))
    axes[0].plot(orders, [as_float(e) for e in e_hats], marker="o", ms=3)
    axes[0].set_ylabel("eigenvalue estimate")
    axes[1].semilogy(orders, [as_float(r) for r in residuals], marker="s", ms=3, color="tab:red")
    axes[1].set_ylabel("residual error square")
    axes[1].set_xlabel("order")
    if wavefunction is not None:
        xs, ys = wavefunction
        axes[2].plot([as_float(x) for x in xs], [as_float(y) for y in ys])
        axes[2].set_xlabel("coordinate")
        axes[2].set_ylabel("wavefunction")
    if title:
        axes[0].set_title(title)
    for ax in axes:
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(rows, path, title=None):
    """Residual versus control parameter, one line per sampled order."""
    by_order = {}
    for c0, order, residual, _ in rows:
        by_order.setdefault(order, []).append((as_float(c0), as_float(residual)))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for order in sorted(by_order):
        pts = sorted(by_order[order])
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], label=f"order {order}")
    ax.set_xlabel("convergence-control parameter")
    ax.set_ylabel("residual error square")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_iteration_figure(rows, path, title=None):
    """Residual versus restart pass."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogy([r[0] for r in rows], [as_float(r[2]) for r in rows], marker="o", ms=3)
    ax.set_xlabel("pass")
    ax.set_ylabel("residual error square")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_continuation_figure(rows, path, title=None):
    """Converged eigenvalue versus coupling."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogx([as_float(r[0]) for r in rows], [as_float(r[1]) for r in rows], marker="o", ms=4)
    ax.set_xlabel("quartic coupling")
    ax.set_ylabel("eigenvalue")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_spectrum_figure(values, path, title=None):
    """Eigenvalue ladder from the diagonalization oracle."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(range(len(values)), [as_float(v) for v in values], marker="_", ms=14, ls="none")
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
