"""Render the per-scale trajectory panels from ``msrcgr plotdata`` output.

    msrcgr plotdata ATCGATCGTAGC -o traj.json
    python scripts/plot_trajectories.py traj.json -o traj.png

One panel per scale: corners as labelled dots (small alphabets only), the
path from the origin with edge opacity rising with step order, and a bar
chart of the 24 descriptor values when present.
"""
import argparse
import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def draw_panel(ax, traj):
    pts = traj["points_float"]
    corners = traj.get("corners", {})
    for tok, (cx, cy) in corners.items():
        ax.plot(cx, cy, "o", color="0.6", ms=3)
        if len(corners) <= 16:
            ax.annotate(tok, (cx, cy), textcoords="offset points", xytext=(4, 4), fontsize=7)
    n = len(pts) - 1
    for t in range(1, len(pts)):
        (x0, y0), (x1, y1) = pts[t - 1], pts[t]
        ax.plot([x0, x1], [y0, y1], color="tab:blue", alpha=0.15 + 0.85 * t / max(n, 1), lw=1.2)
    ax.plot(*pts[0], "ks", ms=4, label="origin")
    ax.plot(*pts[-1], "r*", ms=8, label="final")
    ax.set_title(f"k={traj['scale']}  ({n} steps)")
    ax.set_aspect("equal")
    ax.set_xlim(-1.1, 1.1)
    ax.set_ylim(-1.1, 1.1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("plotdata", help="JSON written by `msrcgr plotdata`")
    ap.add_argument("-o", "--out", default="trajectories.png")
    args = ap.parse_args()

    with open(args.plotdata) as fh:
        data = json.load(fh)
    trajs = data["trajectories"]
    has_features = "features" in data
    cols = len(trajs)
    fig, axes = plt.subplots(1 + has_features, cols, figsize=(3.2 * cols, 3.4 * (1 + has_features)),
                             squeeze=False)
    for ax, traj in zip(axes[0], trajs):
        draw_panel(ax, traj)
    axes[0][0].legend(fontsize=7, loc="lower left")
    if has_features:
        gs = axes[1][0].get_gridspec()
        for ax in axes[1]:
            ax.remove()
        bar = fig.add_subplot(gs[1, :])
        names = list(data["features"])
        bar.bar(range(len(names)), list(data["features"].values()), color="tab:gray")
        bar.set_xticks(range(len(names)), names, rotation=90, fontsize=7)
        bar.set_title("24-value CGR descriptor")
    fig.suptitle(data["sequence"][:60])
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
