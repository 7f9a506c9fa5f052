"""Figure rendering for solver traces and study results.

Figures are written to files only when the caller asks for them (the CSV
trace stays the primary machine-readable output).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_TINY = 1e-18


def save_convergence_figure(trace_rows, path, title=None):
    """Residual norm and penalty weight (log scale) plus objective and h
    per outer iteration."""
    its = [row.iter for row in trace_rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    ax1.semilogy(its, [max(row.residual_norm, _TINY) for row in trace_rows],
                 marker=".", label="residual norm")
    ax1.semilogy(its, [row.mu for row in trace_rows], linestyle="--",
                 label="mu")
    ax1.set_ylabel("residual / mu")
    ax1.legend()
    ax1.grid(True, which="both", alpha=0.3)
    ax2.plot(its, [row.objective for row in trace_rows], marker=".",
             label="objective")
    ax2.plot(its, [row.h_value for row in trace_rows], linestyle="--",
             label="h")
    ax2.set_xlabel("outer iteration")
    ax2.set_ylabel("value")
    ax2.legend()
    ax2.grid(True, alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_modes_figure(trajectories, path, title=None):
    """Overlay of residual-norm trajectories, one line per mode."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for mode, traj in trajectories.items():
        its = [row.iter for row in traj.rows]
        ax.semilogy(its, [max(row.residual_norm, _TINY) for row in traj.rows],
                    marker=".", label=mode)
    ax.set_xlabel("outer iteration")
    ax.set_ylabel("residual norm")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_gap_scatter(records, path, title=None):
    """Residual norm against objective gap, one point per instance."""
    fig, ax = plt.subplots(figsize=(6, 5))
    xs = [max(rec.final_residual_norm, _TINY) for rec in records]
    ys = [max(abs(rec.objective_gap), _TINY) for rec in records]
    ax.loglog(xs, ys, "o")
    ax.set_xlabel("residual norm")
    ax.set_ylabel("|objective gap|")
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
